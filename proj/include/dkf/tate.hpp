#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "drinfeld.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "local_field.hpp"
#include "numeric.hpp"

namespace dkf {

// Uniformizer digits held back from every reported defect.
inline constexpr std::int64_t kTateMargin = 2;

namespace detail {

inline std::int64_t tate_working_precision(std::int64_t P) { return P + 4 * kTateMargin + 2; }
inline constexpr std::size_t kMaxTateLayers = 40;

inline LocalElem rel_truncated(const LocalElem& x, std::int64_t R) {
    if (x.is_zero()) return x;
    return x.truncated(x.valuation() + R);
}

// Inverse carried to the relative precision the element supports.
inline LocalElem rel_inverse(const LocalElem& x, std::int64_t R) {
    const LocalElem y = rel_truncated(x, R);
    return y.inverse(y.precision() - 2 * y.valuation());
}

inline RationalFn eval_additive(const OrePoly<RationalFn>& f, const RationalFn& x) {
    RationalFn acc = x.zero_like();
    RationalFn p = x;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i > 0) p = p.frob();
        acc = acc + f.coeff(i) * p;
    }
    return acc;
}

inline PolyA poly_from_code(const FieldPtr& F, std::uint64_t code) {
    std::vector<FqCode> c;
    while (code != 0) {
        c.push_back(static_cast<FqCode>(code % F->order()));
        code /= F->order();
    }
    return PolyA(F, std::move(c));
}

// Coefficients of the Ore product f*g through tau-degree D, untrimmed so that
// coefficients that vanish to precision keep their precision.
inline std::vector<LocalElem> ore_product(const std::vector<LocalElem>& f, const std::vector<LocalElem>& g, std::size_t D) {
    const LocalFieldPtr& K = f.front().local_field();
    std::vector<LocalElem> out(D + 1, K->zero());
    std::vector<LocalElem> tw(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(std::min(g.size(), D + 1)));
    for (std::size_t i = 0; i < f.size() && i <= D; ++i) {
        if (i > 0)
            for (auto& x : tw) x = x.frob();
        for (std::size_t j = 0; j < tw.size() && i + j <= D; ++j) out[i + j] += f[i] * tw[j];
    }
    return out;
}

} // namespace detail

// Rank-one Tate datum (psi, psi(A) gamma) at a finite place l. gamma is kept
// as an element of F so that it can be expanded at any precision.
class TateDatum {
public:
    TateDatum(DrinfeldModule<RationalFn> psi, const PrimePlace& place, RationalFn gamma)
        : psi_(std::move(psi)), gamma_(std::move(gamma)) {
        if (!place.is_finite()) throw DomainError("Tate data are taken at a finite place");
        K_ = LocalField::make(place);
        ReductionData rd = stable_model(psi_, place);
        if (rd.type != ReductionData::Type::good || rd.mu != 0)
            throw DomainError("psi must have good reduction at " + place.to_string() + " (integral coefficients, unit leading coefficient)");
        if (gamma_.is_zero()) throw DomainError("gamma must be nonzero");
        v_gamma_ = *gamma_.valuation(place);
        if (v_gamma_ >= 0) throw DomainError("gamma must have negative valuation at " + place.to_string());
    }

    // gamma = psi_{p^m}(s), which makes the representatives of psi_{p^m}^{-1}(Gamma)/Gamma rational.
    static TateDatum from_seed(const DrinfeldModule<RationalFn>& psi, const PrimePlace& place, const PolyA& p, std::int64_t m, const RationalFn& s) {
        if (m < 1 || p.degree() < Degree(1)) throw DomainError("seed construction needs a nonconstant p and m >= 1");
        const PolyA pm = p.pow(static_cast<std::uint64_t>(m));
        TateDatum d(psi, place, detail::eval_additive(psi.phi_of(pm), s));
        d.seed_ = Seed{pm, s};
        return d;
    }

    const DrinfeldModule<RationalFn>& psi() const noexcept { return psi_; }
    const LocalFieldPtr& local_field() const noexcept { return K_; }
    const PrimePlace& place() const noexcept { return K_->place(); }
    const FieldPtr& field() const noexcept { return K_->base(); }
    std::uint32_t q() const noexcept { return psi_.q(); }
    std::int64_t r_psi() const { return psi_.rank(); }
    const RationalFn& gamma() const noexcept { return gamma_; }
    std::int64_t gamma_valuation() const noexcept { return v_gamma_; }
    // gamma expanded to relative precision R.
    LocalElem gamma_local(std::int64_t R) const { return K_->complete(gamma_, v_gamma_ + R); }
    std::vector<LocalElem> psi_local(std::int64_t P) const {
        std::vector<LocalElem> out;
        for (const auto& c : psi_.phi_t().coeffs()) out.push_back(c.is_zero() ? K_->zero() : K_->complete(c, P));
        return out;
    }

    struct Seed {
        PolyA pm;
        RationalFn s;
    };
    const std::optional<Seed>& seed() const noexcept { return seed_; }

private:
    DrinfeldModule<RationalFn> psi_;
    RationalFn gamma_;
    LocalFieldPtr K_;
    std::int64_t v_gamma_ = 0;
    std::optional<Seed> seed_;
};

inline NormValue covolume_of_phi(const TateDatum& d) { return NormValue(Rational(-d.gamma_valuation()), d.r_psi()); }

// The nonzero lattice points psi_a(gamma) with norm at most `bound`, listed
// by the integer code of a.
inline std::vector<LocalElem> lattice_points(const TateDatum& d, const NormValue& bound, std::int64_t rel_precision = kDefaultPrecision) {
    const NormValue c1 = covolume_of_phi(d);
    if (bound < c1) throw DomainError("bound too small: norm bound " + bound.to_string() + " is below |gamma| = " + c1.to_string());
    std::int64_t max_deg = 0;
    while (NormValue::q_power(d.q(), max_deg + 1) * c1 <= bound) {
        ++max_deg;
        if (max_deg > 12) throw ResourceLimitError("lattice point enumeration exceeds 13 layers");
    }
    const auto psi_t = d.psi_local(rel_precision);
    std::vector<LocalElem> w{detail::rel_truncated(d.gamma_local(rel_precision), rel_precision)};
    for (std::int64_t k = 1; k <= max_deg; ++k)
        w.push_back(detail::rel_truncated(local_eval_additive(std::span<const LocalElem>(psi_t), w.back()), rel_precision));
    const std::uint64_t count = detail::checked_pow(d.q(), static_cast<std::uint64_t>(max_deg + 1), std::uint64_t{1} << 20);
    const LocalFieldPtr& K = d.local_field();
    std::vector<LocalElem> out;
    for (std::uint64_t code = 1; code < count; ++code) {
        PolyA a = detail::poly_from_code(d.field(), code);
        LocalElem x = K->zero();
        for (std::size_t j = 0; j < a.coeffs().size(); ++j)
            if (a.coeffs()[j] != 0) x += K->constant(a.coeffs()[j]) * w[j];
        out.push_back(x);
    }
    return out;
}

// e_Gamma assembled one F_q-span layer at a time: with w_k = psi_{t^k}(gamma)
// and E_0 = X, E_{k+1} = E_k - E_k(w_k)^{1-q} E_k^q, whose kernel is the span of
// the lattice points of norm at most q^k |gamma|. Values are tracked through
// E_{k+1}(z) = E_k(z) (1 - (E_k(z)/E_k(w_k))^{q-1}), which keeps relative
// precision when v(z) is very negative.
class LatticeExponential {
public:
    LatticeExponential(const TateDatum& d, std::int64_t rel_precision)
        : d_(&d), R_(rel_precision), psi_t_(d.psi_local(rel_precision)) {}

    std::int64_t relative_precision() const noexcept { return R_; }
    std::size_t layers() const noexcept { return inv_.size(); }

    const LocalElem& point(std::size_t k) {
        while (w_.size() <= k) {
            if (w_.empty()) w_.push_back(detail::rel_truncated(d_->gamma_local(R_), R_));
            else w_.push_back(detail::rel_truncated(local_eval_additive(std::span<const LocalElem>(psi_t_), w_.back()), R_));
        }
        return w_[k];
    }

    // E_k(w_k)^{-1}.
    const LocalElem& layer_inverse(std::size_t k) {
        while (inv_.size() <= k) {
            if (inv_.size() >= detail::kMaxTateLayers) throw PrecisionError("lattice exponential exceeds " + std::to_string(detail::kMaxTateLayers) + " layers");
            const std::size_t j = inv_.size();
            LocalElem v = apply(point(j), j);
            if (v.is_zero()) throw PrecisionError("lattice point value vanished to precision");
            inv_.push_back(detail::rel_inverse(v, R_));
        }
        return inv_[k];
    }

    // E_k(z).
    LocalElem apply(const LocalElem& z, std::size_t k) {
        LocalElem v = detail::rel_truncated(z, R_);
        for (std::size_t j = 0; j < k && !v.is_zero(); ++j) v = step(v, j).first;
        return v;
    }

    // e_Gamma(z) to the working relative precision.
    LocalElem eval(const LocalElem& z) {
        LocalElem v = detail::rel_truncated(z, R_);
        for (std::size_t j = 0; !v.is_zero(); ++j) {
            auto [next, rho_val] = step(v, j);
            v = next;
            if (rho_val && *rho_val * static_cast<std::int64_t>(d_->q() - 1) > R_ + 1) return v;
        }
        return v;
    }

private:
    std::pair<LocalElem, std::optional<std::int64_t>> step(const LocalElem& v, std::size_t j) {
        const LocalElem& inv = layer_inverse(j);
        LocalElem rho = detail::rel_truncated(v * inv, R_);
        if (rho.is_zero()) return {v, std::nullopt};
        LocalElem factor = rho.one_like() - rho.pow(d_->q() - 1);
        return {detail::rel_truncated(v * factor, R_), rho.valuation()};
    }

    const TateDatum* d_;
    std::int64_t R_;
    std::vector<LocalElem> psi_t_;
    std::vector<LocalElem> w_;
    std::vector<LocalElem> inv_;
};

struct ExpSeries {
    // e_0 = 1, e_1, ..., e_D.
    std::vector<LocalElem> coeffs;
    // Largest norm of a lattice point multiplied in.
    NormValue norm_bound{1, 1};
    std::size_t layers = 0;
    // Absolute precision attained by every coefficient.
    std::int64_t precision = 0;
};

namespace detail {

// Coefficients at absolute precision W, stopped once they are unchanged mod
// u^P twice in a row and the next layer's correction has valuation >= P.
inline ExpSeries exp_series_working(const TateDatum& d, LatticeExponential& ex, std::size_t D, std::int64_t P) {
    const std::int64_t W = ex.relative_precision();
    const LocalFieldPtr& K = d.local_field();
    std::vector<LocalElem> e{K->one()};
    std::vector<LocalElem> prev;
    int stable = 0;
    auto snapshot = [&] {
        std::vector<LocalElem> s;
        for (const auto& c : e) s.push_back(c.truncated(P));
        return s;
    };
    for (std::size_t k = 0;; ++k) {
        if (k >= kMaxTateLayers)
            throw PrecisionError("precision not attained: e_Gamma coefficients unstable at norm bound " +
                                 (NormValue::q_power(d.q(), static_cast<std::int64_t>(k) - 1) * covolume_of_phi(d)).to_string());
        LocalElem beta = rel_truncated(ex.layer_inverse(k).pow(d.q() - 1), W);
        if (e.size() <= D) e.push_back(K->zero());
        for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] = (e[j] - beta * e[j - 1].frob()).truncated(W);
        auto snap = snapshot();
        stable = (e.size() == D + 1 && snap == prev) ? stable + 1 : 0;
        prev = std::move(snap);
        if (stable >= 2 && beta.valuation_floor() >= P) {
            ExpSeries out;
            out.coeffs = e;
            out.layers = k + 1;
            out.norm_bound = NormValue::q_power(d.q(), static_cast<std::int64_t>(k)) * covolume_of_phi(d);
            out.precision = W;
            for (const auto& c : e) out.precision = std::min(out.precision, c.precision());
            return out;
        }
    }
}

} // namespace detail

inline ExpSeries exp_series(const TateDatum& d, std::size_t D, std::int64_t P) {
    if (D < 1 || P <= 0) throw DomainError("exp_series needs tau-degree >= 1 and precision > 0");
    LatticeExponential ex(d, detail::tate_working_precision(P));
    ExpSeries s = detail::exp_series_working(d, ex, D, P);
    for (auto& c : s.coeffs) c = c.truncated(P);
    s.precision = std::min(s.precision, P);
    return s;
}

struct Reconstruction {
    DrinfeldModule<LocalElem> phi;
    // phi_t coefficients solved through the tau-degree of the series.
    std::vector<LocalElem> solved;
    ExpSeries series;
    // min over tau-degrees <= D of v(e psi_t - phi_t e), capped at the precision.
    std::int64_t defect = 0;
    std::int64_t precision = 0;
};

namespace detail {

inline Reconstruction reconstruct_working(const TateDatum& d, LatticeExponential& ex, std::int64_t P, std::size_t D) {
    const std::int64_t W = ex.relative_precision();
    const std::size_t r1 = static_cast<std::size_t>(d.r_psi()) + 1;
    if (D < r1 + 1) throw DomainError("tau-degree must exceed r_psi + 1 to certify the rank");
    Reconstruction rec;
    rec.series = exp_series_working(d, ex, D, P);
    const auto& e = rec.series.coeffs;
    std::vector<LocalElem> psi = d.psi_local(W);
    const std::vector<LocalElem> e_psi = ore_product(e, psi, D);
    // twisted[i][j] = e_j^{q^i}
    std::vector<std::vector<LocalElem>> twisted{e};
    for (std::size_t i = 1; i <= D; ++i) {
        twisted.push_back({});
        for (std::size_t j = 0; j + i <= D; ++j) twisted[i].push_back(twisted[i - 1][j].frob());
    }
    std::vector<LocalElem> phi;
    for (std::size_t n = 0; n <= D; ++n) {
        LocalElem x = e_psi[n];
        for (std::size_t i = 0; i < n; ++i) x -= phi[i] * twisted[i][n - i];
        phi.push_back(x.truncated(W));
    }
    for (std::size_t n = r1 + 1; n <= D; ++n) {
        if (!phi[n].truncated(P - kTateMargin).is_zero())
            throw PrecisionError("inconsistent reconstruction: phi_t coefficient of tau^" + std::to_string(n) + " has valuation " +
                                 std::to_string(phi[n].valuation_floor()) + " < " + std::to_string(P - kTateMargin));
    }
    if (phi[r1].is_zero()) throw PrecisionError("leading coefficient of the reconstructed phi_t vanished to precision");
    rec.solved = phi;
    std::vector<LocalElem> model(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(r1 + 1));
    rec.phi = DrinfeldModule<LocalElem>(d.q(), model);
    // Independent check: multiply back with the truncated model.
    const std::vector<LocalElem> phi_e = ore_product(model, e, D);
    rec.precision = std::min(P, rec.series.precision);
    rec.defect = rec.precision;
    for (std::size_t n = 0; n <= D; ++n) rec.defect = std::min(rec.defect, (e_psi[n] - phi_e[n]).valuation_floor());
    return rec;
}

} // namespace detail

inline Reconstruction reconstruct_phi(const TateDatum& d, std::int64_t P, std::size_t tau_degree = 8) {
    LatticeExponential ex(d, detail::tate_working_precision(P));
    return detail::reconstruct_working(d, ex, P, tau_degree);
}

// All roots of an additive polynomial over the completion, to absolute
// precision `depth`. The candidates mod u^k that can still extend to a root
// form an F_q-subspace, so the search stays small.
inline std::vector<LocalElem> rational_torsion(const TorsionPolynomial<LocalElem>& f, std::int64_t depth) {
    const LocalFieldPtr& K = f.initial().local_field();
    const NewtonPolygon np = torsion_newton_polygon(f, K->place());
    std::int64_t k0 = 0;
    bool first = true;
    for (const auto& [s, len] : np.root_valuations()) {
        if (!is_integer(s)) throw DomainError("irrational representative: torsion points of valuation " + to_string(s) + " are not defined over the completion");
        const auto v = static_cast<std::int64_t>(numerator(s));
        if (first || v < k0) k0 = v;
        first = false;
    }
    const std::uint64_t expected = detail::checked_pow(f.q, f.top_index(), std::uint64_t{1} << 16);
    std::vector<std::pair<std::int64_t, std::int64_t>> vc;
    {
        std::int64_t qi = 1;
        for (const auto& c : f.coeffs) {
            if (!c.is_zero()) vc.emplace_back(c.valuation(), qi);
            qi *= f.q;
        }
    }
    auto bound = [&](std::int64_t k) {
        std::int64_t b = std::numeric_limits<std::int64_t>::max();
        for (auto [v, qi] : vc) b = std::min(b, v + qi * k);
        return b;
    };
    const std::uint32_t Q = K->residue()->order();
    std::vector<std::pair<LocalElem, LocalElem>> cand{{K->zero(), K->zero()}};
    const std::span<const LocalElem> coeffs(f.coeffs);
    for (std::int64_t k = k0; k < depth + 16; ++k) {
        if (k >= depth && cand.size() == expected) break;
        std::vector<LocalElem> images;
        for (FqCode c = 0; c < Q; ++c) images.push_back(detail::additive_sum(coeffs, K->monomial(c, k)));
        std::vector<std::pair<LocalElem, LocalElem>> next;
        const std::int64_t b = bound(k + 1);
        for (const auto& [x, px] : cand) {
            for (FqCode c = 0; c < Q; ++c) {
                LocalElem py = px + images[c];
                if (py.valuation_floor() < b) continue;
                next.emplace_back(x + K->monomial(c, k), py);
            }
        }
        if (next.size() > 64 * expected) throw ResourceLimitError("torsion digit search exceeded its candidate cap");
        cand = std::move(next);
        if (cand.size() < expected) throw DomainError("irrational representative: only " + std::to_string(cand.size()) + " of " + std::to_string(expected) + " torsion points are defined over the completion");
    }
    if (cand.size() != expected) throw PrecisionError("torsion digit search did not separate the roots");
    std::vector<LocalElem> out;
    for (const auto& [x, px] : cand) out.push_back(x.truncated(depth));
    return out;
}

struct ProductFormulaReport {
    LocalElem lhs;
    LocalElem rhs;
    std::int64_t defect = 0;
    std::size_t representatives = 0;
    // Every nonzero representative z satisfies v(z) >= floor.
    Rational valuation_floor;
    bool floor_holds = false;
    Reconstruction reconstruction;
};

// a(p^m) = p^m / prod_{z in Z \ 0} e_Gamma(z), with Z = { psi_b(s) + eta :
// deg b < deg p^m, eta in psi[p^m] } for a datum built from the seed s.
inline ProductFormulaReport product_formula_check(const TateDatum& d, const PolyA& p, std::int64_t m, std::int64_t P, std::size_t tau_degree = 8) {
    if (!d.seed()) throw DomainError("product formula needs a datum constructed from a seed");
    const PolyA pm = p.pow(static_cast<std::uint64_t>(m < 1 ? 1 : m));
    if (m < 1 || !(d.seed()->pm == pm)) throw DomainError("datum seed was built for a different level");
    const std::int64_t W = detail::tate_working_precision(P);
    const LocalFieldPtr& K = d.local_field();
    const std::int64_t deg = pm.degree().value();
    const std::size_t r1 = static_cast<std::size_t>(d.r_psi()) + 1;
    tau_degree = std::max(tau_degree, r1 * static_cast<std::size_t>(deg) + 1);

    ProductFormulaReport rep;
    LatticeExponential ex(d, W);
    rep.reconstruction = detail::reconstruct_working(d, ex, P, tau_degree);

    TorsionPolynomial<RationalFn> tp = torsion_poly(d.psi(), pm);
    std::int64_t vmax = 0;
    for (const auto& c : tp.coeffs)
        if (!c.is_zero()) vmax = std::max(vmax, *c.valuation(d.place()));
    const std::vector<LocalElem> eta = rational_torsion(complete(tp, K, W + vmax + 8), W);

    const RationalFn& s = d.seed()->s;
    const std::uint64_t nb = detail::checked_pow(d.q(), static_cast<std::uint64_t>(deg), std::uint64_t{1} << 16);
    rep.valuation_floor = Rational(d.gamma_valuation()) / Rational(ipow(BigInt(d.q()), static_cast<std::uint64_t>(d.r_psi())));
    rep.floor_holds = true;
    LocalElem prod = K->one();
    for (std::uint64_t code = 0; code < nb; ++code) {
        LocalElem base = K->zero();
        if (code != 0) {
            RationalFn pb = detail::eval_additive(d.psi().phi_of(detail::poly_from_code(d.field(), code)), s);
            base = K->complete(pb, *pb.valuation(d.place()) + W);
        }
        for (const auto& h : eta) {
            if (code == 0 && h.is_zero()) continue;
            LocalElem z = base + h;
            if (z.is_zero()) throw PrecisionError("representative vanished to precision");
            if (Rational(z.valuation()) < rep.valuation_floor) rep.floor_holds = false;
            prod = detail::rel_truncated(prod * ex.eval(z), W);
            ++rep.representatives;
        }
    }
    ++rep.representatives; // z = 0
    rep.rhs = (K->complete(pm, W) * detail::rel_inverse(prod, W)).truncated(W);
    OrePoly<LocalElem> phi_pm = rep.reconstruction.phi.phi_of(pm);
    if (phi_pm.degree() != Degree(static_cast<std::int64_t>(r1) * deg)) throw PrecisionError("leading coefficient of the reconstructed phi_{p^m} vanished to precision");
    rep.lhs = phi_pm.coeffs().back().truncated(W);
    rep.defect = std::min(P, (rep.lhs - rep.rhs).valuation_floor());
    rep.lhs = rep.lhs.truncated(P);
    rep.rhs = rep.rhs.truncated(P);
    return rep;
}

// Tate-datum line: module syntax plus "gamma = <rational fn>; place = <poly>"
// or, for seed constructions, "s = <rational fn>; p = <poly>; m = <int>".
struct TateSpec {
    TateDatum datum;
    std::optional<PolyA> p;
    std::int64_t m = 0;
};

inline TateSpec parse_tate_line(std::string_view line, FieldPtr header_field = nullptr) {
    KeyValueLine kv = parse_key_values(line);
    ModuleSpec ms = parse_module_line(line, header_field);
    const FieldPtr& F = ms.field;
    const auto& pl = kv.at("place");
    PolyA l = parse_poly(F, pl.value, pl.offset);
    if (l.degree() < Degree(1) || !is_irreducible(l)) throw ParseError("place must be an irreducible polynomial", pl.offset);
    const PrimePlace place = PrimePlace::finite(l.monic());
    if (kv.has("s")) {
        const auto& se = kv.at("s");
        RationalFn s = parse_rational(F, se.value, se.offset);
        const auto& pe = kv.at("p");
        PolyA p = parse_poly(F, pe.value, pe.offset);
        if (p.degree() < Degree(1) || !is_irreducible(p)) throw ParseError("p must be an irreducible polynomial", pe.offset);
        const std::int64_t m = kv.has("m") ? kv.integer("m") : 1;
        if (m < 1) throw ParseError("m must be positive", kv.at("m").offset);
        return {TateDatum::from_seed(ms.phi, place, p.monic(), m, s), p.monic(), m};
    }
    const auto& ge = kv.at("gamma");
    return {TateDatum(ms.phi, place, parse_rational(F, ge.value, ge.offset)), std::nullopt, 0};
}

} // namespace dkf
