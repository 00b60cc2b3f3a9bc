#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "errors.hpp"
#include "local_field.hpp"
#include "newton_polygon.hpp"
#include "numeric.hpp"
#include "ore.hpp"
#include "parse.hpp"

namespace dkf {

// Coefficient-field hooks used by the generic Drinfeld-module code.
inline RationalFn scalar_like(const RationalFn& like, FqCode c) { return RationalFn::constant(like.field(), c); }
inline LocalElem scalar_like(const LocalElem& like, FqCode c) { return like.local_field()->constant(c); }

// Valuation at a finite place; nullopt for zero. An element of a completion
// that is zero to its precision is treated as zero.
inline std::optional<std::int64_t> valuation_at(const RationalFn& x, const PrimePlace& place) { return x.valuation(place); }
inline std::optional<std::int64_t> valuation_at(const LocalElem& x, const PrimePlace& place) {
    if (!(x.local_field()->place() == place)) throw InputError("valuation requested at a different place");
    if (x.is_zero()) return std::nullopt;
    return x.valuation();
}

// x * l^k for the generator l of the place.
inline RationalFn times_prime_power(const RationalFn& x, const PrimePlace& place, std::int64_t k) {
    return x * RationalFn(place.generator()).pow(k);
}
inline LocalElem times_prime_power(const LocalElem& x, const PrimePlace&, std::int64_t k) {
    return x * x.local_field()->monomial(1, k);
}

template <TwistField C>
class DrinfeldModule {
public:
    DrinfeldModule() = default;

    // phi_t = g_0 + g_1 tau + ... + g_r tau^r with g_r != 0.
    DrinfeldModule(std::uint32_t q, std::vector<C> phi_t_coeffs) : q_(q) {
        if (phi_t_coeffs.empty()) throw InputError("phi_t has no coefficients");
        zero_ = phi_t_coeffs[0].zero_like();
        phi_t_ = OrePoly<C>(zero_, std::move(phi_t_coeffs));
        if (phi_t_.degree() < Degree(1)) throw InputError("phi_t must have tau-degree at least 1");
    }

    std::uint32_t q() const noexcept { return q_; }
    std::int64_t rank() const { return phi_t_.degree().value(); }
    const OrePoly<C>& phi_t() const noexcept { return phi_t_; }
    const C& g(std::size_t i) const noexcept { return phi_t_.coeff(i); }

    // phi_a by Horner's rule in the Ore ring; constants of F_q commute with tau.
    OrePoly<C> phi_of(const PolyA& a) const {
        if (a.is_zero()) throw DomainError("phi_a requires a nonzero operand");
        const C& ref = phi_t_.coeff(0);
        OrePoly<C> acc(zero_);
        for (std::size_t i = a.coeffs().size(); i-- > 0;) {
            acc = acc * phi_t_;
            if (a.coeffs()[i] != 0) acc = acc + OrePoly<C>::scalar(scalar_like(ref, a.coeffs()[i]));
        }
        return acc;
    }

    std::string to_string() const { return phi_t_.to_string(); }

private:
    std::uint32_t q_ = 0;
    C zero_;
    OrePoly<C> phi_t_;
};

inline DrinfeldModule<RationalFn> make_drinfeld(const FieldPtr& F, const std::vector<RationalFn>& phi_t) {
    if (phi_t.empty() || !(phi_t[0] == RationalFn::t(F)))
        throw InputError("phi_t must have constant term t (generic characteristic)");
    return DrinfeldModule<RationalFn>(F->order(), phi_t);
}

inline DrinfeldModule<RationalFn> carlitz(const FieldPtr& F) {
    return make_drinfeld(F, {RationalFn::t(F), RationalFn::constant(F, 1)});
}

// Additive polynomial phi_a(X) = sum_i c_i X^{q^i}.
template <TwistField C>
struct TorsionPolynomial {
    PolyA a;
    std::uint32_t q = 0;
    std::vector<C> coeffs;

    const C& initial() const { return coeffs.front(); }
    // a(p^m): the coefficient of X^{q^{r deg a}}.
    const C& leading() const { return coeffs.back(); }
    std::size_t top_index() const { return coeffs.size() - 1; }
    BigInt root_count() const { return ipow(BigInt(q), top_index()); }
};

template <TwistField C>
TorsionPolynomial<C> torsion_poly(const DrinfeldModule<C>& phi, const PolyA& a) {
    OrePoly<C> f = phi.phi_of(a);
    TorsionPolynomial<C> tp{a, phi.q(), f.coeffs()};
    const std::int64_t expect = phi.rank() * a.degree().value();
    if (static_cast<std::int64_t>(tp.top_index()) != expect)
        throw PrecisionError("leading coefficient of phi_a vanished to precision");
    return tp;
}

// Points (q^i, v(c_i)) of the torsion polynomial's Newton polygon at a place.
template <TwistField C>
NewtonPolygon torsion_newton_polygon(const TorsionPolynomial<C>& tp, const PrimePlace& place) {
    std::vector<std::pair<std::int64_t, std::optional<Rational>>> pts;
    std::int64_t x = 1;
    for (const auto& c : tp.coeffs) {
        auto v = valuation_at(c, place);
        pts.emplace_back(x, v ? std::optional<Rational>(Rational(*v)) : std::nullopt);
        x *= tp.q;
    }
    return newton_polygon(pts);
}

struct ReductionData {
    enum class Type { good, stable_bad, potentially_stable };

    PrimePlace place;
    Rational mu;
    std::int64_t r_psi = 0;
    Type type = Type::good;
    // Ramification degree of the tame extension that makes the twist rational.
    std::int64_t tame_degree = 1;
    // Exponents k_i with g_i l^{k_i} the twisted model; present when the twist
    // is attainable over the completion.
    std::optional<std::vector<std::int64_t>> twist_exponents;

    static std::string type_name(Type t) {
        switch (t) {
            case Type::good: return "good";
            case Type::stable_bad: return "stable-bad";
            case Type::potentially_stable: return "potentially-stable";
        }
        return "";
    }
};

template <TwistField C>
ReductionData stable_model(const DrinfeldModule<C>& phi, const PrimePlace& place) {
    if (!place.is_finite()) throw DomainError("stable_model needs a finite place");
    ReductionData rd{place, Rational(0), 0, ReductionData::Type::good, 1, std::nullopt};
    const std::int64_t r = phi.rank();
    std::optional<Rational> mu;
    std::vector<std::optional<std::int64_t>> vals(static_cast<std::size_t>(r) + 1);
    BigInt qi = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        qi *= phi.q();
        vals[static_cast<std::size_t>(i)] = valuation_at(phi.g(static_cast<std::size_t>(i)), place);
        if (!vals[static_cast<std::size_t>(i)]) continue;
        Rational s = Rational(*vals[static_cast<std::size_t>(i)]) / Rational(qi - 1);
        if (!mu || s < *mu) mu = s;
    }
    rd.mu = *mu;
    qi = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        qi *= phi.q();
        const auto& v = vals[static_cast<std::size_t>(i)];
        if (v && Rational(*v) == rd.mu * Rational(qi - 1)) rd.r_psi = i;
    }
    if (!is_integer(rd.mu)) {
        rd.type = ReductionData::Type::potentially_stable;
        rd.tame_degree = static_cast<std::int64_t>(denominator(rd.mu));
        return rd;
    }
    rd.type = rd.r_psi == r ? ReductionData::Type::good : ReductionData::Type::stable_bad;
    const auto m = static_cast<std::int64_t>(numerator(rd.mu));
    std::vector<std::int64_t> k(static_cast<std::size_t>(r) + 1, 0);
    std::int64_t qk = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        qk *= phi.q();
        k[static_cast<std::size_t>(i)] = -m * (qk - 1);
    }
    rd.twist_exponents = std::move(k);
    return rd;
}

// Coefficients g_i l^{k_i} of the twisted model.
template <TwistField C>
std::vector<C> twisted_coefficients(const DrinfeldModule<C>& phi, const ReductionData& rd) {
    if (!rd.twist_exponents) throw DomainError("twist is not attainable over the completion");
    std::vector<C> out;
    for (std::int64_t i = 0; i <= phi.rank(); ++i)
        out.push_back(times_prime_power(phi.g(static_cast<std::size_t>(i)), rd.place, (*rd.twist_exponents)[static_cast<std::size_t>(i)]));
    return out;
}

struct ValuationBounds {
    Rational upper;
    Rational lower;
};

// Interval containing the valuation of every nonzero root of phi_{p^m} at l.
template <TwistField C>
ValuationBounds torsion_valuation_bounds(const DrinfeldModule<C>& phi, const PrimePlace& l, const PrimePlace& p, std::int64_t m) {
    if (!p.is_finite() || m < 1) throw DomainError("torsion level needs a finite prime and m >= 1");
    for (std::int64_t i = 0; i <= phi.rank(); ++i) {
        auto v = valuation_at(phi.g(static_cast<std::size_t>(i)), l);
        if (v && *v < 0) throw DomainError("model is not integral at " + l.to_string() + "; run stable_model first");
    }
    const PolyA pm = p.generator().pow(static_cast<std::uint64_t>(m));
    TorsionPolynomial<C> tp = torsion_poly(phi, pm);
    const std::int64_t v_pm = multiplicity(pm, l.generator());
    const auto v_a = valuation_at(tp.leading(), l);
    if (!v_a) throw PrecisionError("leading torsion coefficient is zero to precision");
    const BigInt q = phi.q();
    const BigInt denom = ipow(q, tp.top_index() - 1) * (q - 1);
    return {Rational(v_pm) / Rational(q - 1), -Rational(*v_a) / Rational(denom)};
}

// Torsion polynomial with coefficients expanded in the completion.
inline TorsionPolynomial<LocalElem> complete(const TorsionPolynomial<RationalFn>& tp, const LocalFieldPtr& K, std::int64_t precision) {
    TorsionPolynomial<LocalElem> out{tp.a, tp.q, {}};
    for (const auto& c : tp.coeffs) out.coeffs.push_back(c.is_zero() ? K->zero() : K->complete(c, precision));
    return out;
}

inline LocalElem local_eval_additive(const TorsionPolynomial<LocalElem>& f, const LocalElem& x) {
    return local_eval_additive(std::span<const LocalElem>(f.coeffs), x);
}

// Module line "q=3; r=2; phi_t = t + (t+1)*tau + t^2*tau^2". The value
// "carlitz" stands for t + tau. An Fq header may supply a non-prime field.
struct ModuleSpec {
    FieldPtr field;
    DrinfeldModule<RationalFn> phi;
};

inline ModuleSpec parse_module_line(std::string_view line, FieldPtr header_field = nullptr) {
    KeyValueLine kv = parse_key_values(line);
    FieldPtr F = header_field;
    if (kv.has("q")) {
        const std::int64_t q = kv.integer("q");
        if (q < 2 || q > (1 << 20)) throw ParseError("q out of range", kv.at("q").offset);
        if (F && F->order() != static_cast<std::uint32_t>(q)) throw ParseError("q disagrees with the Fq header", kv.at("q").offset);
        if (!F) F = make_fq_of_order(static_cast<std::uint32_t>(q));
    }
    if (!F) throw InputError("module line needs q=");
    const auto& e = kv.at("phi_t");
    OreF f = e.value == "carlitz" ? carlitz(F).phi_t() : parse_ore(F, e.value, e.offset);
    if (kv.has("r") && Degree(kv.integer("r")) != f.degree())
        throw ParseError("declared rank does not match the tau-degree of phi_t", kv.at("r").offset);
    if (f.is_zero() || !(f.coeff(0) == RationalFn::t(F))) throw ParseError("phi_t must have constant term t", e.offset);
    if (f.degree() < Degree(1)) throw ParseError("phi_t must have positive tau-degree", e.offset);
    return {F, make_drinfeld(F, f.coeffs())};
}

} // namespace dkf
