#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finite_field.hpp"

namespace dkf {

// Degree of a polynomial; the zero polynomial has degree -infinity, which is
// a distinct state rather than a magic integer.
class Degree {
public:
    static constexpr Degree neg_infinity() noexcept { return Degree(); }
    constexpr explicit Degree(std::int64_t d) noexcept : value_(d), finite_(true) {}

    constexpr bool is_neg_infinity() const noexcept { return !finite_; }
    std::int64_t value() const {
        if (!finite_) throw DomainError("degree of the zero polynomial is -infinity");
        return value_;
    }

    friend constexpr bool operator==(Degree a, Degree b) noexcept {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) noexcept {
        if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
        return a.value_ <=> b.value_;
    }
    friend constexpr Degree operator+(Degree a, Degree b) noexcept {
        if (!a.finite_ || !b.finite_) return Degree();
        return Degree(a.value_ + b.value_);
    }

    std::string to_string() const { return finite_ ? std::to_string(value_) : "-inf"; }

private:
    constexpr Degree() noexcept = default;
    std::int64_t value_ = 0;
    bool finite_ = false;
};

// Element of A = F_q[t]. Coefficients are stored low degree first with no
// trailing zeros.
class PolyA {
public:
    PolyA() = default;
    explicit PolyA(FieldPtr field) : field_(std::move(field)) {}
    PolyA(FieldPtr field, std::vector<FqCode> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

    static PolyA constant(FieldPtr field, FqCode c) { return PolyA(std::move(field), {c}); }
    static PolyA monomial(FieldPtr field, FqCode c, std::size_t k) {
        std::vector<FqCode> v(k + 1, 0);
        v[k] = c;
        return PolyA(std::move(field), std::move(v));
    }
    static PolyA t(FieldPtr field) { return monomial(std::move(field), 1, 1); }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<FqCode>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    Degree degree() const noexcept {
        return c_.empty() ? Degree::neg_infinity() : Degree(static_cast<std::int64_t>(c_.size()) - 1);
    }
    FqCode coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    FqCode leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

    PolyA monic() const {
        if (is_zero()) return *this;
        return scaled(field_->inv(leading()));
    }

    PolyA scaled(FqCode s) const {
        if (s == 0) return PolyA(field_);
        std::vector<FqCode> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = field_->mul(c_[i], s);
        return PolyA(field_, std::move(v));
    }

    PolyA shifted(std::size_t k) const {
        if (is_zero()) return *this;
        std::vector<FqCode> v(k, 0);
        v.insert(v.end(), c_.begin(), c_.end());
        return PolyA(field_, std::move(v));
    }

    friend PolyA operator+(const PolyA& a, const PolyA& b) { return a.combine(b, false); }
    friend PolyA operator-(const PolyA& a, const PolyA& b) { return a.combine(b, true); }
    PolyA operator-() const {
        std::vector<FqCode> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = field_->neg(c_[i]);
        return PolyA(field_, std::move(v));
    }
    friend PolyA operator*(const PolyA& a, const PolyA& b) {
        const FieldPtr& f = a.field_ ? a.field_ : b.field_;
        if (a.is_zero() || b.is_zero()) return PolyA(f);
        std::vector<FqCode> v(a.c_.size() + b.c_.size() - 1, 0);
        const FiniteField& F = *f;
        // Frobenius twists are sparse, so iterate over the support only.
        std::vector<std::size_t> sa, sb;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i] != 0) sa.push_back(i);
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j] != 0) sb.push_back(j);
        for (std::size_t i : sa) {
            const FqCode x = a.c_[i];
            for (std::size_t j : sb) v[i + j] = F.add(v[i + j], F.mul(x, b.c_[j]));
        }
        return PolyA(f, std::move(v));
    }
    PolyA& operator+=(const PolyA& o) { return *this = *this + o; }
    PolyA& operator-=(const PolyA& o) { return *this = *this - o; }
    PolyA& operator*=(const PolyA& o) { return *this = *this * o; }

    friend bool operator==(const PolyA& a, const PolyA& b) noexcept { return a.c_ == b.c_; }

    // Quotient and remainder; divisor must be nonzero.
    std::pair<PolyA, PolyA> divmod(const PolyA& d) const {
        if (d.is_zero()) throw DomainError("polynomial division by zero");
        const FiniteField& F = *field_or(d);
        if (c_.size() < d.c_.size()) return {PolyA(field_or(d)), *this};
        std::vector<FqCode> r = c_;
        std::vector<FqCode> q(c_.size() - d.c_.size() + 1, 0);
        FqCode lead_inv = F.inv(d.leading());
        const std::size_t dd = d.c_.size() - 1;
        for (std::size_t k = r.size(); k-- > dd;) {
            FqCode c = r[k];
            if (c == 0) continue;
            FqCode factor = F.mul(c, lead_inv);
            q[k - dd] = factor;
            for (std::size_t i = 0; i <= dd; ++i)
                r[k - dd + i] = F.sub(r[k - dd + i], F.mul(factor, d.c_[i]));
        }
        r.resize(dd);
        return {PolyA(field_or(d), std::move(q)), PolyA(field_or(d), std::move(r))};
    }
    friend PolyA operator/(const PolyA& a, const PolyA& b) { return a.divmod(b).first; }
    friend PolyA operator%(const PolyA& a, const PolyA& b) { return a.divmod(b).second; }

    bool divides(const PolyA& other) const { return (other % *this).is_zero(); }

    FqCode eval(FqCode x) const {
        FqCode acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = field_->add(field_->mul(acc, x), c_[i]);
        return acc;
    }

    PolyA derivative() const {
        if (c_.size() <= 1) return PolyA(field_);
        std::vector<FqCode> v(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            v[i - 1] = field_->mul(field_->from_int(static_cast<std::int64_t>(i % field_->characteristic())), c_[i]);
        return PolyA(field_, std::move(v));
    }

    PolyA pow(std::uint64_t e) const {
        PolyA result = PolyA::constant(field_, 1);
        PolyA base = *this;
        while (e != 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e != 0) base *= base;
        }
        return result;
    }

    // p(t)^q for q = |F_q|: coefficients are fixed by the q-power map.
    PolyA frobenius() const {
        if (is_zero()) return *this;
        const std::size_t q = field_->order();
        std::vector<FqCode> v((c_.size() - 1) * q + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) v[i * q] = c_[i];
        return PolyA(field_, std::move(v));
    }

    // Sum c_i q^i over coefficient codes; a total order on polynomials of a
    // fixed degree compatible with lexicographic coefficient order read from
    // the top.
    std::uint64_t code() const {
        std::uint64_t x = 0;
        for (std::size_t i = c_.size(); i-- > 0;) x = x * field_->order() + c_[i];
        return x;
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            std::string c = field_->to_string(c_[i]);
            if (c.find_first_of("+*^") != std::string::npos) c = "(" + c + ")";
            std::string term;
            if (i == 0) term = c;
            else {
                std::string mono = i == 1 ? var : var + "^" + std::to_string(i);
                term = c_[i] == 1 ? mono : c + "*" + mono;
            }
            if (!out.empty()) out += "+";
            out += term;
        }
        return out;
    }

private:
    const FieldPtr& field_or(const PolyA& o) const noexcept { return field_ ? field_ : o.field_; }

    PolyA combine(const PolyA& b, bool subtract) const {
        const FieldPtr& f = field_or(b);
        std::vector<FqCode> v(std::max(c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            FqCode x = i < c_.size() ? c_[i] : 0;
            FqCode y = i < b.c_.size() ? b.c_[i] : 0;
            v[i] = subtract ? f->sub(x, y) : f->add(x, y);
        }
        return PolyA(f, std::move(v));
    }

    void trim() noexcept {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    FieldPtr field_;
    std::vector<FqCode> c_;
};

inline PolyA gcd(PolyA a, PolyA b) {
    while (!b.is_zero()) {
        PolyA r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Returns (g, s, u) with s*a + u*b = g = gcd(a, b), g monic.
inline std::tuple<PolyA, PolyA, PolyA> xgcd(const PolyA& a, const PolyA& b) {
    const FieldPtr& f = a.field() ? a.field() : b.field();
    PolyA r0 = a, r1 = b;
    PolyA s0 = PolyA::constant(f, 1), s1(f);
    PolyA u0(f), u1 = PolyA::constant(f, 1);
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        PolyA s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        PolyA u2 = u0 - q * u1;
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    if (r0.is_zero()) return {r0, s0, u0};
    FqCode li = f->inv(r0.leading());
    return {r0.scaled(li), s0.scaled(li), u0.scaled(li)};
}

// |a|_infty = q^{deg a}; returns the exponent (degree), -infinity for zero.
inline Degree abs_infty(const PolyA& a) noexcept { return a.degree(); }

} // namespace dkf
