#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "base_algebra.hpp"
#include "drinfeld.hpp"
#include "errors.hpp"
#include "newton_polygon.hpp"
#include "numeric.hpp"
#include "univariate.hpp"

namespace dkf {

// A totally ramified Galois extension L = K_l[X]/(h) presented by the images
// sigma(x) = g_sigma(x) mod h of the generator x. table[a][b] is the index of
// sigma_a sigma_b.
struct GaloisPresentation {
    PrimePlace place;
    UPoly h;
    std::vector<UPoly> sigma;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> table;
    bool eisenstein = false;

    std::size_t order() const noexcept { return sigma.size(); }
    std::int64_t degree() const { return h.degree().value(); }
};

inline bool is_eisenstein(const UPoly& h, const PrimePlace& place) {
    if (!h.is_monic() || h.degree() < Degree(1)) return false;
    const auto n = static_cast<std::size_t>(h.degree().value());
    auto v0 = h.coeff(0).valuation(place);
    if (!v0 || *v0 != 1) return false;
    for (std::size_t i = 1; i < n; ++i) {
        auto v = h.coeff(i).valuation(place);
        if (v && *v < 1) return false;
    }
    return true;
}

// v_L(alpha(x)) = v_l(Res_X(h, alpha)) for totally ramified L, normalized so
// that v_L(L^x) = Z.
inline Rational ext_valuation(const UPoly& alpha, const UPoly& h, const PrimePlace& place) {
    if (!h.is_monic()) throw DomainError("generator polynomial must be monic");
    UPoly a = alpha % h;
    if (a.is_zero()) throw DomainError("ext_valuation of an element that is zero in L");
    RationalFn res = resultant(h, a);
    if (res.is_zero()) throw DomainError("ext_valuation: resultant vanished; h is not irreducible");
    return Rational(*res.valuation(place));
}

// Same valuation read off the x-adic expansion when h is Eisenstein:
// v_L(sum a_i x^i) = min_i (n v_l(a_i) + i), the minimum being attained once.
inline Rational ext_valuation_eisenstein(const UPoly& alpha, const UPoly& h, const PrimePlace& place) {
    if (!is_eisenstein(h, place)) throw DomainError("generator polynomial is not Eisenstein at " + place.to_string());
    UPoly a = alpha % h;
    if (a.is_zero()) throw DomainError("ext_valuation of an element that is zero in L");
    const std::int64_t n = h.degree().value();
    std::optional<std::int64_t> best;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        auto v = a.coeffs()[i].valuation(place);
        if (!v) continue;
        const std::int64_t w = n * *v + static_cast<std::int64_t>(i);
        if (!best || w < *best) best = w;
    }
    return Rational(*best);
}

// Checks that h is monic and Eisenstein, that every g_sigma maps x to a root
// of h, and that the table is the group law given by composition mod h.
inline void validate_presentation(const GaloisPresentation& P) {
    if (!P.h.is_monic()) throw DomainError("presentation: h must be monic");
    if (!is_eisenstein(P.h, P.place)) throw DomainError("presentation: only Eisenstein (totally ramified) presentations are supported");
    const std::size_t n = P.order();
    if (n == 0 || P.table.size() != n || static_cast<std::int64_t>(n) != P.degree())
        throw DomainError("presentation: group order must equal deg h");
    if (!(P.sigma[0] == UPoly::x(P.h.field()) % P.h)) throw DomainError("presentation: sigma_0 must be the identity");
    for (std::size_t a = 0; a < n; ++a) {
        if (!P.h.compose_mod(P.sigma[a], P.h).is_zero()) throw DomainError("presentation: sigma_" + P.labels[a] + "(x) is not a root of h");
        std::vector<bool> seen(n, false);
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t c = P.table[a][b];
            if (c >= n || seen[c]) throw DomainError("presentation: group table row is not a permutation");
            seen[c] = true;
            // (sigma_a sigma_b)(x) = sigma_a(g_b(x)) = g_b(g_a(x))
            if (!(P.sigma[b].compose_mod(P.sigma[a], P.h) == P.sigma[c]))
                throw DomainError("presentation: composition disagrees with the group table at (" + P.labels[a] + "," + P.labels[b] + ")");
        }
    }
}

// K_p(phi[p^m]) for the Carlitz module phi: h = phi_{p^m}(X) / phi_{p^{m-1}}(X),
// group (A/p^m)^x acting by sigma_a(x) = phi_a(x) mod h.
inline GaloisPresentation carlitz_local(const FieldPtr& F, const PolyA& p_in, std::int64_t m, std::uint64_t cap = 4096) {
    if (m < 1) throw DomainError("level m must be positive");
    if (p_in.degree() < Degree(1) || !is_irreducible(p_in)) throw DomainError("p must be an irreducible polynomial");
    const PolyA p = p_in.monic();
    const std::int64_t d = p.degree().value();
    const std::uint64_t q = F->order();
    const std::uint64_t size = detail::checked_pow(q, static_cast<std::uint64_t>(m * d), cap * q);
    const std::uint64_t order = size / detail::checked_pow(q, static_cast<std::uint64_t>(d), cap * q) * (detail::checked_pow(q, static_cast<std::uint64_t>(d), cap * q) - 1);
    if (order > cap) throw ResourceLimitError("group order " + std::to_string(order) + " exceeds the cap " + std::to_string(cap));

    const auto phi = carlitz(F);
    const PolyA pm = p.pow(static_cast<std::uint64_t>(m));
    GaloisPresentation P{PrimePlace::finite(p), UPoly(F), {}, {}, {}, false};
    const UPoly top = UPoly::additive(F, phi.phi_of(pm).coeffs());
    const UPoly below = m == 1 ? UPoly::x(F) : UPoly::additive(F, phi.phi_of(p.pow(static_cast<std::uint64_t>(m - 1))).coeffs());
    auto [h, rem] = top.divmod(below);
    if (!rem.is_zero()) throw DomainError("phi_{p^{m-1}} does not divide phi_{p^m}");
    P.h = h;
    P.eisenstein = is_eisenstein(h, P.place);

    // X^{q^i} mod h
    std::vector<UPoly> xp{UPoly::x(F) % h};
    for (std::int64_t i = 1; i < m * d; ++i) {
        UPoly y = xp.back();
        UPoly acc = UPoly::constant(F, RationalFn::constant(F, 1));
        for (std::uint64_t k = 0; k < q; ++k) acc = (acc * y) % h;
        xp.push_back(acc);
    }
    std::map<std::uint64_t, std::size_t> index;
    std::vector<PolyA> elems;
    for (std::uint64_t code = 1; code < size; ++code) {
        std::vector<FqCode> c;
        for (std::uint64_t x = code; x != 0; x /= q) c.push_back(static_cast<FqCode>(x % q));
        PolyA a(F, std::move(c));
        if ((a % p).is_zero()) continue;
        index[a.code()] = elems.size();
        elems.push_back(a);
    }
    // Identity first.
    std::stable_partition(elems.begin(), elems.end(), [](const PolyA& a) { return a.is_one(); });
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i].code()] = i;
    for (const auto& a : elems) {
        const auto coeffs = phi.phi_of(a).coeffs();
        UPoly g(F);
        for (std::size_t i = 0; i < coeffs.size(); ++i) g = g + xp[i].scaled(coeffs[i]);
        P.sigma.push_back(g % h);
        P.labels.push_back(a.to_string());
    }
    P.table.assign(elems.size(), std::vector<std::size_t>(elems.size()));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j) P.table[i][j] = index.at(((elems[i] * elems[j]) % pm).code());
    return P;
}

struct Filtration {
    std::size_t group_order = 1;
    // orders[k] = |G_{k-1}| for k = 0, 1, ..., i.e. i = -1, 0, 1, ..., i_max.
    std::vector<std::size_t> orders{1};
    std::vector<std::int64_t> lower_breaks;
    // i(sigma) per group element; the identity carries nullopt.
    std::vector<std::optional<std::int64_t>> i_values;

    std::size_t order_at(std::int64_t i) const {
        const std::int64_t k = i + 1;
        if (k < 0) return group_order;
        if (k >= static_cast<std::int64_t>(orders.size())) return 1;
        return orders[static_cast<std::size_t>(k)];
    }
};

namespace detail {

inline Filtration filtration_from(std::vector<std::optional<std::int64_t>> iv) {
    Filtration f;
    f.group_order = iv.size();
    f.i_values = std::move(iv);
    std::int64_t imax = -1;
    for (const auto& v : f.i_values)
        if (v) imax = std::max(imax, *v);
    f.orders.clear();
    for (std::int64_t i = -1; i <= imax; ++i) {
        std::size_t c = 0;
        for (const auto& v : f.i_values)
            if (!v || *v >= i + 1) ++c;
        f.orders.push_back(c);
    }
    for (std::int64_t i = -1; i < imax; ++i)
        if (f.order_at(i) > f.order_at(i + 1)) f.lower_breaks.push_back(i);
    return f;
}

} // namespace detail

// i(sigma) = v_L(g_sigma(x) - x) through resultants; G_i = {sigma : i(sigma) >= i+1}.
inline Filtration lower_filtration(const GaloisPresentation& P) {
    if (!is_eisenstein(P.h, P.place)) throw DomainError("lower_filtration needs a uniformizing (Eisenstein) generator; other generators are unsupported");
    const UPoly x = UPoly::x(P.h.field()) % P.h;
    std::vector<std::optional<std::int64_t>> iv;
    for (const auto& g : P.sigma) {
        UPoly diff = g - x;
        if ((diff % P.h).is_zero()) iv.push_back(std::nullopt);
        else iv.push_back(static_cast<std::int64_t>(numerator(ext_valuation(diff, P.h, P.place))));
    }
    return detail::filtration_from(std::move(iv));
}

// Exact piecewise-linear function on [-1, oo): value ys[k] at xs[k], slope
// slopes[k] on [xs[k], xs[k+1]] (the last slope continues to infinity).
struct HerbrandFn {
    std::vector<Rational> xs;
    std::vector<Rational> ys;
    std::vector<Rational> slopes;

    Rational operator()(const Rational& u) const {
        if (u < xs.front()) throw DomainError("Herbrand function evaluated below -1");
        std::size_t k = 0;
        while (k + 1 < xs.size() && xs[k + 1] <= u) ++k;
        return ys[k] + slopes[k] * (u - xs[k]);
    }
    HerbrandFn inverse() const {
        HerbrandFn g{ys, xs, {}};
        for (const auto& s : slopes) g.slopes.push_back(Rational(1) / s);
        return g;
    }
};

// phi(u) = int_0^u dt / [G_0 : G_t].
inline HerbrandFn herbrand_phi(const Filtration& f) {
    HerbrandFn h;
    const Rational g0(static_cast<long long>(f.order_at(0)));
    h.xs = {Rational(-1), Rational(0)};
    h.ys = {Rational(-1), Rational(0)};
    h.slopes = {Rational(1)};
    std::vector<std::int64_t> pts;
    for (auto b : f.lower_breaks)
        if (b > 0) pts.push_back(b);
    Rational x(0), y(0);
    for (auto b : pts) {
        const Rational s = Rational(static_cast<long long>(f.order_at(b))) / g0;
        h.slopes.push_back(s);
        y += s * (Rational(b) - x);
        x = Rational(b);
        h.xs.push_back(x);
        h.ys.push_back(y);
    }
    h.slopes.push_back(Rational(1) / g0);
    return h;
}

inline HerbrandFn herbrand_psi(const Filtration& f) { return herbrand_phi(f).inverse(); }

// Serre's formula phi(u) = (1/g_0) sum_{sigma in G_0} min(i(sigma), u + 1) - 1.
inline Rational herbrand_phi_by_sum(const Filtration& f, const Rational& u) {
    if (u <= 0) return u;
    Rational s(0);
    std::size_t g0 = 0;
    for (const auto& v : f.i_values) {
        if (v && *v < 1) continue;
        ++g0;
        s += v ? std::min(Rational(*v), Rational(u + 1)) : Rational(u + 1);
    }
    return s / Rational(static_cast<long long>(g0)) - Rational(1);
}

struct BreakReport {
    std::vector<std::int64_t> lower_breaks;
    std::vector<Rational> upper_breaks;
    Rational maximal_break{-1};
    std::size_t group_order = 1;
    std::size_t tame_order = 1;
    std::size_t wild_order = 1;
    // ord_L of the different, sum over sigma != 1 of i(sigma).
    std::int64_t different = 0;
};

inline BreakReport break_report(const Filtration& f) {
    BreakReport r;
    r.group_order = f.group_order;
    r.lower_breaks = f.lower_breaks;
    r.wild_order = f.order_at(1);
    r.tame_order = f.order_at(0) / r.wild_order;
    for (const auto& v : f.i_values)
        if (v) r.different += *v;
    const HerbrandFn phi = herbrand_phi(f);
    for (auto b : f.lower_breaks) r.upper_breaks.push_back(phi(Rational(b)));
    if (f.group_order > 1 && !f.lower_breaks.empty()) r.maximal_break = phi(Rational(f.lower_breaks.back()));
    return r;
}

inline BreakReport break_report(const GaloisPresentation& P) { return break_report(lower_filtration(P)); }

// inf{u : G^u = 1}; -1 for the trivial group.
inline Rational maximal_break(const GaloisPresentation& P) { return break_report(P).maximal_break; }

// Second route: i(sigma) from the x-adic expansion of g_sigma(x) - x and the
// Herbrand function from Serre's sum formula.
inline Rational maximal_break_by_sum(const GaloisPresentation& P) {
    if (P.order() == 1) return Rational(-1);
    const UPoly x = UPoly::x(P.h.field()) % P.h;
    std::vector<std::optional<std::int64_t>> iv;
    std::int64_t imax = -1;
    for (const auto& g : P.sigma) {
        UPoly diff = g - x;
        if ((diff % P.h).is_zero()) {
            iv.push_back(std::nullopt);
            continue;
        }
        const auto v = static_cast<std::int64_t>(numerator(ext_valuation_eisenstein(diff, P.h, P.place)));
        imax = std::max(imax, v);
        iv.push_back(v);
    }
    Filtration f;
    f.i_values = std::move(iv);
    return herbrand_phi_by_sum(f, Rational(imax - 1));
}

inline bool hasse_arf_holds(const BreakReport& r) {
    return std::all_of(r.upper_breaks.begin(), r.upper_breaks.end(), [](const Rational& u) { return is_integer(u); });
}

} // namespace dkf
