#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "errors.hpp"
#include "local_field.hpp"
#include "numeric.hpp"
#include "parse.hpp"

namespace dkf {

// The positive real x^{1/s}, compared exactly through integer powers.
class NormValue {
public:
    NormValue() : x_(1), s_(1) {}
    NormValue(Rational x, std::int64_t s) : x_(std::move(x)), s_(s) {
        if (x_ <= 0) throw DomainError("norm value base must be positive");
        if (s_ < 1) throw DomainError("norm value root index must be >= 1");
    }

    static NormValue q_power(std::uint32_t q, std::int64_t d) { return NormValue(rpow(Rational(q), d), 1); }

    const Rational& base() const noexcept { return x_; }
    std::int64_t root_index() const noexcept { return s_; }

    // x^{1/s} when it is rational.
    std::optional<Rational> rational_value() const {
        auto root = [&](const BigInt& n) -> std::optional<BigInt> {
            BigInt r = floor_root(n, static_cast<unsigned>(s_));
            if (ipow(r, static_cast<std::uint64_t>(s_)) == n) return r;
            return std::nullopt;
        };
        auto n = root(numerator(x_));
        auto d = root(denominator(x_));
        if (!n || !d) return std::nullopt;
        return Rational(*n) / Rational(*d);
    }

    friend NormValue operator*(const NormValue& a, const NormValue& b) {
        const std::int64_t L = std::lcm(a.s_, b.s_);
        return NormValue(rpow(a.x_, L / a.s_) * rpow(b.x_, L / b.s_), L);
    }
    NormValue pow(std::int64_t k) const { return NormValue(rpow(x_, k), s_); }

    friend std::strong_ordering operator<=>(const NormValue& a, const NormValue& b) {
        Rational lhs = rpow(a.x_, b.s_), rhs = rpow(b.x_, a.s_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const NormValue& a, const NormValue& b) { return (a <=> b) == 0; }

    // "(x,s)"
    std::string to_string() const { return "(" + dkf::to_string(x_) + "," + std::to_string(s_) + ")"; }

private:
    Rational x_;
    std::int64_t s_;
};

using LatticeVector = std::vector<RationalFn>;

namespace detail {

// deg at infinity: deg num - deg den, or -infinity for zero.
inline Degree inf_degree(const RationalFn& x) {
    if (x.is_zero()) return Degree::neg_infinity();
    return Degree(x.num().degree().value() - x.den().degree().value());
}

// Coefficient of t^d in the expansion at infinity, for d = inf_degree(x).
inline FqCode inf_leading(const RationalFn& x) {
    const FiniteField& F = *x.field();
    return F.div(x.num().leading(), x.den().leading());
}

inline Degree vector_degree(const LatticeVector& v) {
    Degree d = Degree::neg_infinity();
    for (const auto& x : v) d = std::max(d, inf_degree(x));
    return d;
}

} // namespace detail

// Free A-module spanned by the columns of an n x r matrix over F, embedded in
// K_inf^n with the sup-norm |v| = q^{max_i deg v_i}. Entries are exact
// rational functions, i.e. elements of F inside K_inf.
class AmbientLattice {
public:
    AmbientLattice(FieldPtr F, std::vector<LatticeVector> columns) : F_(std::move(F)), cols_(std::move(columns)) {
        if (cols_.empty()) throw InputError("lattice needs at least one basis vector");
        n_ = cols_.front().size();
        if (n_ == 0) throw InputError("lattice ambient dimension must be positive");
        for (const auto& c : cols_) {
            if (c.size() != n_) throw InputError("lattice basis vectors differ in length");
            for (const auto& x : c)
                if (!same_field(x.field(), F_)) throw InputError("lattice entries over different fields");
        }
        if (column_rank() != cols_.size()) throw InputError("lattice basis vectors are linearly dependent");
    }

    const FieldPtr& field() const noexcept { return F_; }
    std::size_t rank() const noexcept { return cols_.size(); }
    std::size_t dimension() const noexcept { return n_; }
    const std::vector<LatticeVector>& basis() const noexcept { return cols_; }

    // Norm exponent d(v) with |v| = q^{d(v)}.
    static std::int64_t norm_exponent(const LatticeVector& v) {
        Degree d = detail::vector_degree(v);
        if (d.is_neg_infinity()) throw DomainError("norm of the zero vector");
        return d.value();
    }

    LatticeVector combination(const std::vector<PolyA>& coeffs) const {
        if (coeffs.size() != cols_.size()) throw InputError("coefficient tuple has the wrong length");
        LatticeVector v(n_, RationalFn::constant(F_, 0));
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (coeffs[j].is_zero()) continue;
            RationalFn a(coeffs[j]);
            for (std::size_t i = 0; i < n_; ++i) v[i] = v[i] + a * cols_[j][i];
        }
        return v;
    }

private:
    std::size_t column_rank() const {
        std::vector<LatticeVector> m = cols_;
        std::size_t rank = 0;
        for (std::size_t row = 0; row < n_ && rank < m.size(); ++row) {
            std::size_t piv = rank;
            while (piv < m.size() && m[piv][row].is_zero()) ++piv;
            if (piv == m.size()) continue;
            std::swap(m[rank], m[piv]);
            for (std::size_t j = rank + 1; j < m.size(); ++j) {
                if (m[j][row].is_zero()) continue;
                RationalFn f = m[j][row] / m[rank][row];
                for (std::size_t i = row; i < n_; ++i) m[j][i] = m[j][i] - f * m[rank][i];
            }
            ++rank;
        }
        return rank;
    }

    FieldPtr F_;
    std::size_t n_ = 0;
    std::vector<LatticeVector> cols_;
};

struct SuccessiveMinima {
    std::vector<std::int64_t> exponents;
    std::vector<NormValue> minima;
    std::vector<LatticeVector> basis;
};

namespace detail {

// Leading residue vector t^{-d} v mod (1/t) at d = d(v).
inline std::vector<FqCode> leading_vector(const LatticeVector& v, std::int64_t d) {
    std::vector<FqCode> out(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero() && inf_degree(v[i]) == Degree(d)) out[i] = inf_leading(v[i]);
    return out;
}

// Processes vectors in the given order and returns the first one that is an
// F_q-combination of its predecessors, with the coefficients c_j (c_k = 1)
// of the relation sum_j c_j w_j = 0.
inline std::optional<std::pair<std::size_t, std::vector<FqCode>>> first_dependency(const FiniteField& F, const std::vector<std::vector<FqCode>>& w, const std::vector<std::size_t>& order) {
    const std::size_t n = w.empty() ? 0 : w.front().size();
    const std::size_t m = w.size();
    // Echelon rows: reduced vector plus the combination of inputs producing it.
    struct Row {
        std::vector<FqCode> v;
        std::vector<FqCode> combo;
        std::size_t pivot;
    };
    std::vector<Row> rows;
    for (std::size_t k : order) {
        Row cur{w[k], std::vector<FqCode>(m, 0), 0};
        cur.combo[k] = 1;
        for (const auto& r : rows) {
            FqCode c = cur.v[r.pivot];
            if (c == 0) continue;
            for (std::size_t i = 0; i < n; ++i) cur.v[i] = F.sub(cur.v[i], F.mul(c, r.v[i]));
            for (std::size_t j = 0; j < m; ++j) cur.combo[j] = F.sub(cur.combo[j], F.mul(c, r.combo[j]));
        }
        std::size_t p = 0;
        while (p < n && cur.v[p] == 0) ++p;
        if (p == n) return std::make_pair(k, cur.combo);
        FqCode inv = F.inv(cur.v[p]);
        for (auto& x : cur.v) x = F.mul(x, inv);
        for (auto& x : cur.combo) x = F.mul(x, inv);
        cur.pivot = p;
        rows.push_back(std::move(cur));
    }
    return std::nullopt;
}

inline LatticeVector shifted_scaled(const LatticeVector& v, FqCode c, std::int64_t shift) {
    const FieldPtr& F = v.front().field();
    RationalFn factor(PolyA::monomial(F, c, static_cast<std::size_t>(shift)));
    LatticeVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(factor * x);
    return out;
}

} // namespace detail

// Successive-minimum basis by leading-vector cancellation. Among dependent
// columns of equal norm the one with the smallest index is reduced; the
// result is sorted by norm, ties kept in index order.
inline SuccessiveMinima reduce_basis(const AmbientLattice& L) {
    const FiniteField& F = *L.field();
    std::vector<LatticeVector> cols = L.basis();
    const std::size_t r = cols.size();
    std::vector<std::int64_t> d(r);
    for (std::size_t j = 0; j < r; ++j) d[j] = AmbientLattice::norm_exponent(cols[j]);
    while (true) {
        std::vector<std::vector<FqCode>> lv(r);
        for (std::size_t j = 0; j < r; ++j) lv[j] = detail::leading_vector(cols[j], d[j]);
        std::vector<std::size_t> order(r);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] != d[b] ? d[a] < d[b] : a > b; });
        auto dep = detail::first_dependency(F, lv, order);
        if (!dep) break;
        const auto& [k, c] = *dep;
        LatticeVector next = cols[k];
        for (std::size_t j = 0; j < r; ++j) {
            if (j == k || c[j] == 0) continue;
            LatticeVector add = detail::shifted_scaled(cols[j], c[j], d[k] - d[j]);
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = next[i] + add[i];
        }
        Degree nd = detail::vector_degree(next);
        if (nd.is_neg_infinity()) throw InputError("lattice basis vectors are linearly dependent");
        cols[k] = std::move(next);
        d[k] = nd.value();
    }
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    SuccessiveMinima sm;
    const auto q = F.order();
    for (std::size_t j : order) {
        sm.exponents.push_back(d[j]);
        sm.minima.push_back(NormValue::q_power(q, d[j]));
        sm.basis.push_back(cols[j]);
    }
    // Normal form: leading vectors monic with distinct pivots, each pivot
    // cleared from the later vectors and from earlier vectors of equal norm.
    std::vector<std::size_t> pivot(r);
    auto axpy = [&](std::size_t dst, std::size_t src, FqCode c) {
        LatticeVector add = detail::shifted_scaled(sm.basis[src], F.neg(c), sm.exponents[dst] - sm.exponents[src]);
        for (std::size_t i = 0; i < add.size(); ++i) sm.basis[dst][i] = sm.basis[dst][i] + add[i];
    };
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            FqCode c = detail::leading_vector(sm.basis[k], sm.exponents[k])[pivot[j]];
            if (c != 0) axpy(k, j, c);
        }
        std::vector<FqCode> lv = detail::leading_vector(sm.basis[k], sm.exponents[k]);
        std::size_t p = 0;
        while (lv[p] == 0) ++p;
        pivot[k] = p;
        if (lv[p] != 1) sm.basis[k] = detail::shifted_scaled(sm.basis[k], F.inv(lv[p]), 0);
        for (std::size_t j = 0; j < k; ++j) {
            if (sm.exponents[j] != sm.exponents[k]) continue;
            FqCode c = detail::leading_vector(sm.basis[j], sm.exponents[j])[p];
            if (c != 0) axpy(j, k, c);
        }
    }
    return sm;
}

inline std::vector<NormValue> successive_minima(const AmbientLattice& L) { return reduce_basis(L).minima; }

namespace detail {

// Matrix U over F with candidate = basis * U, or nullopt if the candidate
// vectors do not lie in the F-span of the basis.
inline std::optional<std::vector<std::vector<RationalFn>>> change_of_basis(const AmbientLattice& L, const std::vector<LatticeVector>& cand) {
    const std::size_t n = L.dimension(), r = L.rank(), m = cand.size();
    const RationalFn zero = RationalFn::constant(L.field(), 0);
    // Augmented rows [B | C], eliminated to reduced row echelon form.
    std::vector<std::vector<RationalFn>> rows(n, std::vector<RationalFn>(r + m, zero));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) rows[i][j] = L.basis()[j][i];
        for (std::size_t j = 0; j < m; ++j) rows[i][r + j] = cand[j][i];
    }
    std::size_t pr = 0;
    std::vector<std::size_t> pivot_row(r);
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t p = pr;
        while (p < n && rows[p][col].is_zero()) ++p;
        if (p == n) return std::nullopt;
        std::swap(rows[pr], rows[p]);
        RationalFn inv = rows[pr][col].inverse();
        for (auto& x : rows[pr]) x = x * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == pr || rows[i][col].is_zero()) continue;
            RationalFn f = rows[i][col];
            for (std::size_t j = 0; j < r + m; ++j) rows[i][j] = rows[i][j] - f * rows[pr][j];
        }
        pivot_row[col] = pr++;
    }
    for (std::size_t i = pr; i < n; ++i)
        for (std::size_t j = r; j < r + m; ++j)
            if (!rows[i][j].is_zero()) return std::nullopt;
    std::vector<std::vector<RationalFn>> U(r, std::vector<RationalFn>(m, zero));
    for (std::size_t col = 0; col < r; ++col)
        for (std::size_t j = 0; j < m; ++j) U[col][j] = rows[pivot_row[col]][r + j];
    return U;
}

inline RationalFn determinant(std::vector<std::vector<RationalFn>> M) {
    const std::size_t n = M.size();
    RationalFn det = RationalFn::constant(M[0][0].field(), 1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M[p][c].is_zero()) ++p;
        if (p == n) return RationalFn::constant(M[0][0].field(), 0);
        if (p != c) {
            std::swap(M[p], M[c]);
            det = -det;
        }
        det = det * M[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (M[i][c].is_zero()) continue;
            RationalFn f = M[i][c] / M[c][c];
            for (std::size_t j = c; j < n; ++j) M[i][j] = M[i][j] - f * M[c][j];
        }
    }
    return det;
}

} // namespace detail

// True iff the candidate is a successive-minimum basis of L. Throws if the
// candidate is not an A-basis of L.
inline bool is_smb(const AmbientLattice& L, const std::vector<LatticeVector>& candidate) {
    if (candidate.size() != L.rank()) throw InputError("candidate basis has the wrong size");
    auto U = detail::change_of_basis(L, candidate);
    if (!U) throw InputError("candidate vectors do not lie in the lattice span");
    for (const auto& row : *U)
        for (const auto& x : row)
            if (!x.is_polynomial()) throw InputError("candidate vectors are not in the lattice");
    RationalFn det = detail::determinant(*U);
    if (!det.is_constant() || det.is_zero()) throw InputError("candidate vectors do not generate the lattice");

    const FiniteField& F = *L.field();
    std::vector<std::int64_t> d;
    std::vector<std::vector<FqCode>> lv;
    for (const auto& v : candidate) {
        d.push_back(AmbientLattice::norm_exponent(v));
        lv.push_back(detail::leading_vector(v, d.back()));
    }
    std::vector<std::size_t> order(candidate.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    return !detail::first_dependency(F, lv, order).has_value();
}

inline NormValue covolume(const std::vector<NormValue>& minima) {
    NormValue D;
    for (const auto& c : minima) D = D * c;
    return D;
}

// epsilon^{-(r-1)} D, an upper bound for c_r whenever epsilon <= c_1.
inline NormValue last_minimum_bound(const NormValue& eps, const NormValue& D, std::int64_t r) {
    if (r < 1) throw DomainError("rank must be positive");
    return eps.pow(-(r - 1)) * D;
}

// (-v(gamma))^{1/r_psi}.
inline NormValue gardeyn_norm(const LocalElem& gamma, std::int64_t r_psi) {
    const std::int64_t v = gamma.valuation();
    if (v >= 0) throw DomainError("gardeyn_norm needs v(gamma) < 0, got " + std::to_string(v));
    return NormValue(Rational(-v), r_psi);
}

// Row-major matrix text: rows separated by ';' or newlines, entries by ','.
// Column j of the matrix is the j-th basis vector.
inline AmbientLattice parse_lattice(const FieldPtr& F, std::string_view text) {
    std::vector<std::vector<RationalFn>> rows;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find_first_of(";\n", start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view row = text.substr(start, end - start);
        if (!trim_copy(row).empty()) {
            std::vector<RationalFn> entries;
            std::size_t s = 0;
            while (s <= row.size()) {
                std::size_t e = row.find(',', s);
                if (e == std::string_view::npos) e = row.size();
                entries.push_back(parse_rational(F, row.substr(s, e - s), start + s));
                s = e + 1;
            }
            if (!rows.empty() && entries.size() != rows.front().size()) throw ParseError("ragged lattice matrix", start);
            rows.push_back(std::move(entries));
        }
        start = end + 1;
    }
    if (rows.empty()) throw ParseError("empty lattice matrix", 0);
    std::vector<LatticeVector> cols(rows.front().size());
    for (const auto& row : rows)
        for (std::size_t j = 0; j < row.size(); ++j) cols[j].push_back(row[j]);
    return AmbientLattice(F, std::move(cols));
}

} // namespace dkf
