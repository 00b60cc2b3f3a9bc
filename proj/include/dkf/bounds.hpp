#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "drinfeld.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "numeric.hpp"
#include "ramification.hpp"
#include "tate.hpp"

namespace dkf {

inline constexpr std::uint64_t kDefaultFactorialCap = 10000;

namespace detail {

inline BigInt capped_factorial(const BigInt& n, std::uint64_t cap, const char* what) {
    if (n < 0) throw DomainError(std::string(what) + ": negative argument");
    if (n > cap) throw ResourceLimitError(std::string(what) + ": factorial of " + n.str() + " exceeds the cap " + std::to_string(cap));
    return factorial(static_cast<std::uint64_t>(n));
}

inline void require_positive(std::int64_t x, const char* name) {
    if (x < 1) throw DomainError(std::string(name) + " must be positive");
}

} // namespace detail

// (q^{r deg p^m})!
inline BigInt obvious_e_bound(std::uint32_t q, std::int64_t r, std::int64_t degpm, std::uint64_t cap = kDefaultFactorialCap) {
    detail::require_positive(q, "q");
    detail::require_positive(r, "r");
    detail::require_positive(degpm, "deg p^m");
    return detail::capped_factorial(ipow(BigInt(q), static_cast<std::uint64_t>(r * degpm)), cap, "obvious_e_bound");
}

// e (v_pm/(q-1) + v_a/(q^{r deg p^m - 1}(q-1)) + 1) - 1
inline Rational prop1_break_bound(std::uint32_t q, std::int64_t r, const Rational& v_pm, const Rational& v_a, std::int64_t degpm, const Rational& e) {
    if (v_pm < 0 || v_a < 0) throw DomainError("prop1_break_bound: negative valuation (model is not integral)");
    if (e < 1) throw DomainError("prop1_break_bound: ramification index must be >= 1");
    detail::require_positive(r, "r");
    detail::require_positive(degpm, "deg p^m");
    const Rational q1(q - 1);
    const Rational top(ipow(BigInt(q), static_cast<std::uint64_t>(r * degpm - 1)));
    return e * (v_pm / q1 + v_a / (top * q1) + 1) - 1;
}

// C' = (q^r - 1)!
inline BigInt cprime(std::uint32_t q, std::int64_t r, std::uint64_t cap = kDefaultFactorialCap) {
    detail::require_positive(q, "q");
    detail::require_positive(r, "r");
    return detail::capped_factorial(ipow(BigInt(q), static_cast<std::uint64_t>(r)) - 1, cap, "cprime");
}

// v_pm + q^{r deg p^m - 1} N^r C'^{(r+1)(r-2)}
inline Rational prop2_leading_bound(std::uint32_t q, std::int64_t r, std::int64_t degpm, const Rational& v_pm, const BigInt& N, const BigInt& Cp) {
    if (N < 1 || Cp < 1) throw DomainError("prop2_leading_bound: N and C' must be >= 1");
    detail::require_positive(r, "r");
    detail::require_positive(degpm, "deg p^m");
    const Rational top(ipow(BigInt(q), static_cast<std::uint64_t>(r * degpm - 1)));
    return v_pm + top * Rational(ipow(N, static_cast<std::uint64_t>(r))) * rpow(Rational(Cp), (r + 1) * (r - 2));
}

// 1 + 2 sum_i q^{i-1} v(gamma_1/gamma_i) prod_{j<=i} c_i/c_j. An irrational
// product c_i^i / (c_1...c_i) is replaced by the next integer above it.
inline Rational gardeyn_different_bound(const std::vector<NormValue>& minima, const std::vector<Rational>& valuations, std::uint32_t q) {
    if (minima.empty() || minima.size() != valuations.size()) throw DomainError("gardeyn_different_bound: minima and valuations must have equal positive length");
    const std::int64_t s = minima.front().root_index();
    for (const auto& c : minima)
        if (c.root_index() != s) throw DomainError("gardeyn_different_bound: inconsistent norm root indices");
    for (const auto& v : valuations)
        if (v < 0) throw DomainError("gardeyn_different_bound: v(gamma_1/gamma_i) must be nonnegative");
    Rational sum = 0;
    Rational qi = 1;
    for (std::size_t i = 0; i < minima.size(); ++i) {
        Rational prod = 1;
        for (std::size_t j = 0; j <= i; ++j) prod *= minima[i].base() / minima[j].base();
        const NormValue ratio(prod, s);
        const auto exact = ratio.rational_value();
        const Rational factor = exact ? *exact : Rational(ceil_root(prod, static_cast<unsigned>(s)));
        sum += qi * valuations[i] * factor;
        qi *= q;
    }
    return 1 + 2 * sum;
}

inline BigInt mythm_e_bound(std::uint32_t q, std::int64_t r, const BigInt& N, std::uint64_t cap = kDefaultFactorialCap) {
    detail::require_positive(r, "r");
    if (N < 1) throw DomainError("mythm_e_bound: N must be >= 1");
    if (r == 1) return 2;
    const BigInt Cp = cprime(q, r, cap);
    return 2 + 4 * ipow(BigInt(q), static_cast<std::uint64_t>(r - 2)) * ipow(Cp, static_cast<std::uint64_t>(r * (r - 2))) *
                   ipow(N, static_cast<std::uint64_t>(r - 1));
}

// Exponent of C' in the break bound: (r-1)^2/4 when integral, else its ceiling.
struct MythmExponent {
    std::int64_t value = 0;
    bool ceiling = false;
};

inline MythmExponent mythm_exponent(std::int64_t r) {
    const std::int64_t n = (r - 1) * (r - 1);
    return {(n + 3) / 4, n % 4 != 0};
}

inline BigInt mythm_break_bound(std::uint32_t q, std::int64_t r, const BigInt& N, std::uint64_t cap = kDefaultFactorialCap) {
    if (r < 2) throw DomainError("mythm_break_bound requires r >= 2");
    const BigInt e = mythm_e_bound(q, r, N, cap);
    const BigInt Cp = cprime(q, r, cap);
    const auto k = mythm_exponent(r);
    return e * (ipow(Cp, static_cast<std::uint64_t>(k.value)) * ipow(N, static_cast<std::uint64_t>(r)) + 1) - 1;
}

inline Rational tame_basechange_break_bound(const Rational& u, std::int64_t d) {
    detail::require_positive(d, "d");
    if (u < -1) throw DomainError("break must be >= -1");
    if (u == -1) return Rational(-1);
    return u * d;
}

// lcm_{1 <= i <= r} (q^i - 1)
inline BigInt tame_constant(std::uint32_t q, std::int64_t r) {
    detail::require_positive(r, "r");
    BigInt out = 1;
    for (std::int64_t i = 1; i <= r; ++i) out = lcm(out, ipow(BigInt(q), static_cast<std::uint64_t>(i)) - 1);
    return out;
}

struct CertificationProfile {
    std::int64_t r = 2;
    std::vector<std::pair<PrimePlace, BigInt>> N;
    std::vector<std::pair<PrimePlace, std::int64_t>> m;

    std::optional<BigInt> N_at(const PrimePlace& l) const {
        for (const auto& [p, n] : N)
            if (p == l) return n;
        return std::nullopt;
    }
    std::optional<std::int64_t> m_at(const PrimePlace& p) const {
        for (const auto& [pl, k] : m)
            if (pl == p) return k;
        return std::nullopt;
    }
    void validate() const {
        if (r < 1) throw DomainError("profile rank cap must be >= 1");
        for (const auto& [p, n] : N)
            if (n < 1) throw DomainError("profile N at " + p.to_string() + " must be >= 1");
        for (const auto& [p, k] : m)
            if (k < 0) throw DomainError("profile m at " + p.to_string() + " must be >= 0");
    }
};

struct ModuleCase {
    DrinfeldModule<RationalFn> phi;
    PrimePlace place;
    PolyA p;
    std::int64_t m = 1;
};

struct TateCase {
    TateDatum datum;
    PolyA p;
    std::int64_t m = 1;
};

using CertInput = std::variant<ModuleCase, TateCase>;

struct CertifyOptions {
    std::uint64_t cap_factorial = kDefaultFactorialCap;
    std::uint64_t cap_enum = 4096;
    std::int64_t precision = 30;
    std::size_t tau_degree = 8;
};

struct Sourced {
    Rational value;
    // exact, computed, obvious, mythm, prop2
    std::string provenance;
};

struct Check {
    std::string name;
    std::string detail;
    bool holds = false;
};

struct BoundReport {
    std::string kind;
    std::string place;
    std::string prime;
    std::int64_t m = 0;
    std::uint32_t q = 0;
    std::int64_t rank = 0;
    Rational v_pm;
    std::optional<Sourced> v_a;
    Sourced e;
    Rational prop1_bound;
    std::optional<Rational> prop1_bound_obvious;
    std::optional<Rational> prop2_bound;
    std::optional<BigInt> N;
    std::optional<BigInt> mythm_e;
    std::optional<BigInt> mythm_break;
    std::optional<MythmExponent> mythm_rule;
    std::optional<Rational> gardeyn_bound;
    std::optional<Rational> exact_break;
    std::optional<BreakReport> breaks;
    std::vector<Check> checks;
    bool verdict = false;
};

namespace detail {

inline void add_check(BoundReport& r, std::string name, std::string detail, bool holds) {
    r.checks.push_back({std::move(name), std::move(detail), holds});
}

inline std::string le_detail(const Rational& a, const Rational& b) { return to_string(a) + " <= " + to_string(b); }

inline bool is_carlitz(const DrinfeldModule<RationalFn>& phi) {
    return phi.rank() == 1 && phi.g(1) == RationalFn::constant(phi.g(0).field(), 1);
}

inline void finish(BoundReport& r) {
    r.verdict = !r.checks.empty();
    for (const auto& c : r.checks) r.verdict = r.verdict && c.holds;
}

inline BoundReport certify_module(const ModuleCase& c, const CertificationProfile& prof, const CertifyOptions& opt) {
    const auto& phi = c.phi;
    const PrimePlace& l = c.place;
    BoundReport r;
    r.kind = "module";
    r.place = l.to_string();
    r.prime = c.p.to_string();
    r.m = c.m;
    r.q = phi.q();
    r.rank = phi.rank();
    if (r.rank > prof.r) throw DomainError("rank " + std::to_string(r.rank) + " exceeds the profile cap " + std::to_string(prof.r));
    const PolyA pm = c.p.pow(static_cast<std::uint64_t>(c.m));
    const std::int64_t degpm = pm.degree().value();
    r.v_pm = Rational(multiplicity(pm, l.generator()));

    const auto tp = torsion_poly(phi, pm);
    const auto va = tp.leading().valuation(l);
    r.v_a = Sourced{Rational(*va), "computed"};

    const BigInt obvious = obvious_e_bound(r.q, r.rank, degpm, opt.cap_factorial);
    if (is_carlitz(phi) && l.generator() == c.p) {
        const auto P = carlitz_local(c.p.field(), c.p, c.m, opt.cap_enum);
        BreakReport br = break_report(P);
        r.e = Sourced{Rational(static_cast<long long>(br.group_order)), "exact"};
        r.exact_break = br.maximal_break;
        const Rational by_sum = maximal_break_by_sum(P);
        add_check(r, "breaks_agree", to_string(br.maximal_break) + " == " + to_string(by_sum), by_sum == br.maximal_break);
        add_check(r, "hasse_arf", "upper breaks integral", hasse_arf_holds(br));
        r.breaks = std::move(br);
    } else {
        r.e = Sourced{Rational(obvious), "obvious"};
    }
    r.prop1_bound = prop1_break_bound(r.q, r.rank, r.v_pm, r.v_a->value, degpm, r.e.value);
    r.prop1_bound_obvious = prop1_break_bound(r.q, r.rank, r.v_pm, r.v_a->value, degpm, Rational(obvious));
    if (r.exact_break) {
        add_check(r, "exact_le_prop1", le_detail(*r.exact_break, r.prop1_bound), *r.exact_break <= r.prop1_bound);
        add_check(r, "exact_le_prop1_obvious", le_detail(*r.exact_break, *r.prop1_bound_obvious), *r.exact_break <= *r.prop1_bound_obvious);
        add_check(r, "e_le_obvious", le_detail(r.e.value, Rational(obvious)), r.e.value <= Rational(obvious));
    } else {
        add_check(r, "prop1_monotone_in_e", le_detail(r.prop1_bound, *r.prop1_bound_obvious), r.prop1_bound <= *r.prop1_bound_obvious);
    }

    const ReductionData rd = stable_model(phi, l);
    r.N = prof.N_at(l);
    if (r.N && rd.type == ReductionData::Type::stable_bad) {
        r.prop2_bound = prop2_leading_bound(r.q, r.rank, degpm, r.v_pm, *r.N, cprime(r.q, r.rank, opt.cap_factorial));
        add_check(r, "v_a_le_prop2", le_detail(r.v_a->value, *r.prop2_bound), r.v_a->value <= *r.prop2_bound);
    }
    if (r.N && r.rank >= 2) {
        r.mythm_e = mythm_e_bound(r.q, r.rank, *r.N, opt.cap_factorial);
        r.mythm_break = mythm_break_bound(r.q, r.rank, *r.N, opt.cap_factorial);
        r.mythm_rule = mythm_exponent(r.rank);
    }
    finish(r);
    return r;
}

inline BoundReport certify_tate(const TateCase& c, const CertificationProfile& prof, const CertifyOptions& opt) {
    const TateDatum& d = c.datum;
    const PrimePlace& l = d.place();
    BoundReport r;
    r.kind = "tate";
    r.place = l.to_string();
    r.prime = c.p.to_string();
    r.m = c.m;
    r.q = d.q();

    const Reconstruction rec = reconstruct_phi(d, opt.precision, opt.tau_degree);
    r.rank = rec.phi.rank();
    if (r.rank > prof.r) throw DomainError("rank " + std::to_string(r.rank) + " exceeds the profile cap " + std::to_string(prof.r));
    add_check(r, "functional_equation_defect", std::to_string(rec.defect) + " >= " + std::to_string(opt.precision - kTateMargin),
              rec.defect >= opt.precision - kTateMargin);
    // r_phi deg p^m = r_psi deg p^m + r_Gamma deg p^m with r_Gamma = 1
    const PolyA pm = c.p.pow(static_cast<std::uint64_t>(c.m));
    const std::int64_t degpm = pm.degree().value();
    add_check(r, "dimension_identity",
              std::to_string(r.rank * degpm) + " == " + std::to_string(d.r_psi() * degpm) + " + " + std::to_string(degpm),
              r.rank * degpm == (d.r_psi() + 1) * degpm);
    const ReductionData rd = stable_model(rec.phi, l);
    add_check(r, "stable_model_recovers_r_psi", std::to_string(rd.r_psi) + " == " + std::to_string(d.r_psi()),
              rd.type == ReductionData::Type::stable_bad && rd.r_psi == d.r_psi());

    r.v_pm = Rational(multiplicity(pm, l.generator()));
    const auto tp = torsion_poly(rec.phi, pm);
    const auto va = valuation_at(tp.leading(), l);
    if (!va) throw PrecisionError("leading coefficient of phi_{p^m} vanished to precision");
    r.v_a = Sourced{Rational(*va), "computed"};

    if (d.seed() && d.seed()->pm == pm) {
        try {
            const auto pf = product_formula_check(d, c.p, c.m, opt.precision, opt.tau_degree);
            add_check(r, "product_formula_defect", std::to_string(pf.defect) + " >= " + std::to_string(opt.precision - kTateMargin),
                      pf.defect >= opt.precision - kTateMargin);
            add_check(r, "representative_valuation_floor", "v(z) >= " + to_string(pf.valuation_floor), pf.floor_holds);
        } catch (const DomainError& e) {
            add_check(r, "product_formula_defect", std::string("not computed: ") + e.what(), true);
        }
    }

    // D(phi, l) = ||gamma||; N is the profile cap, else the least integer >= D.
    const NormValue D = covolume_of_phi(d);
    const BigInt D_ceil = ceil_root(D.base(), static_cast<unsigned>(D.root_index()));
    r.N = prof.N_at(l).value_or(D_ceil);
    add_check(r, "covolume_within_N", "D = (" + to_string(D.base()) + ")^(1/" + std::to_string(D.root_index()) + ") <= " + r.N->str(),
              D <= NormValue(Rational(*r.N), 1));

    const BigInt Cp = cprime(r.q, r.rank, opt.cap_factorial);
    r.prop2_bound = prop2_leading_bound(r.q, r.rank, degpm, r.v_pm, *r.N, Cp);
    add_check(r, "v_a_le_prop2", le_detail(r.v_a->value, *r.prop2_bound), r.v_a->value <= *r.prop2_bound);

    r.mythm_e = mythm_e_bound(r.q, r.rank, *r.N, opt.cap_factorial);
    if (r.rank >= 2) {
        r.mythm_break = mythm_break_bound(r.q, r.rank, *r.N, opt.cap_factorial);
        r.mythm_rule = mythm_exponent(r.rank);
    }
    // Rank-one lattice: ord D <= gardeyn bound, e <= 1 + ord D.
    r.gardeyn_bound = gardeyn_different_bound({D}, {Rational(0)}, r.q);
    add_check(r, "gardeyn_chain_le_mythm_e", le_detail(1 + *r.gardeyn_bound, Rational(*r.mythm_e)), 1 + *r.gardeyn_bound <= Rational(*r.mythm_e));

    r.e = Sourced{Rational(*r.mythm_e), "mythm"};
    r.prop1_bound = prop1_break_bound(r.q, r.rank, r.v_pm, r.v_a->value, degpm, r.e.value);
    finish(r);
    return r;
}

} // namespace detail

inline BoundReport certify(const CertInput& in, const CertificationProfile& profile, const CertifyOptions& opt = {}) {
    profile.validate();
    if (const auto* mc = std::get_if<ModuleCase>(&in)) {
        if (mc->m < 1) throw DomainError("level m must be positive");
        return detail::certify_module(*mc, profile, opt);
    }
    const auto& tc = std::get<TateCase>(in);
    if (tc.m < 1) throw DomainError("level m must be positive");
    return detail::certify_tate(tc, profile, opt);
}

} // namespace dkf
