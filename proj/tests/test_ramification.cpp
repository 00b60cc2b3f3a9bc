#include <gtest/gtest.h>

#include <random>

#include "dkf/parse.hpp"
#include "dkf/ramification.hpp"

using namespace dkf;

namespace {

UPoly upoly(const FieldPtr& F, std::vector<const char*> coeffs) {
    std::vector<RationalFn> c;
    for (const char* s : coeffs) c.push_back(parse_rational(F, s));
    return UPoly(F, std::move(c));
}

PrimePlace place_of(const FieldPtr& F, const char* l) { return PrimePlace::finite(parse_poly(F, l)); }

std::vector<Rational> rationals(std::initializer_list<long long> xs) {
    std::vector<Rational> out;
    for (auto x : xs) out.emplace_back(x);
    return out;
}

} // namespace

TEST(Resultant, SmallCases) {
    FieldPtr F3 = make_fq(3);
    const UPoly h = upoly(F3, {"t", "0", "1"});
    EXPECT_EQ(resultant(h, upoly(F3, {"0", "1"})), parse_rational(F3, "t"));
    EXPECT_EQ(resultant(h, upoly(F3, {"t", "1"})), parse_rational(F3, "t^2+t"));
    EXPECT_EQ(resultant(h, upoly(F3, {"t"})), parse_rational(F3, "t^2"));
    // Res(a, b) = (-1)^{deg a deg b} Res(b, a)
    const UPoly a = upoly(F3, {"1", "t", "0", "1"}), b = upoly(F3, {"t+1", "2", "t"});
    EXPECT_EQ(resultant(a, b), resultant(b, a) * parse_rational(F3, "1"));
    const UPoly c = upoly(F3, {"1", "t"});
    EXPECT_EQ(resultant(a, c), resultant(c, a) * parse_rational(F3, "2"));
}

TEST(ExtValuation, Examples) {
    FieldPtr F3 = make_fq(3);
    const UPoly h = upoly(F3, {"t", "0", "1"});
    const PrimePlace t = place_of(F3, "t");
    EXPECT_EQ(ext_valuation(upoly(F3, {"0", "1"}), h, t), Rational(1));
    EXPECT_EQ(ext_valuation(upoly(F3, {"t"}), h, t), Rational(2));
    EXPECT_EQ(ext_valuation(upoly(F3, {"t", "1"}), h, t), Rational(1));
    EXPECT_THROW(ext_valuation(h, h, t), DomainError);
}

TEST(ExtValuation, ResultantAgreesWithEisensteinExpansion) {
    FieldPtr F3 = make_fq(3);
    auto P = carlitz_local(F3, parse_poly(F3, "t"), 2);
    std::mt19937_64 rng(3);
    const char* pool[] = {"0", "1", "2", "t", "t+1", "t^2", "2*t^2+t", "t^3+1", "1/(t+1)"};
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<const char*> c;
        for (int i = 0; i < 6; ++i) c.push_back(pool[rng() % 9]);
        UPoly a = upoly(F3, c);
        if (a.is_zero()) continue;
        EXPECT_EQ(ext_valuation(a, P.h, P.place), ext_valuation_eisenstein(a, P.h, P.place));
    }
}

TEST(CarlitzLocal, Examples) {
    FieldPtr F3 = make_fq(3), F2 = make_fq(2);
    auto P1 = carlitz_local(F3, parse_poly(F3, "t"), 1);
    EXPECT_EQ(P1.h, upoly(F3, {"t", "0", "1"}));
    EXPECT_EQ(P1.order(), 2U);
    EXPECT_TRUE(P1.eisenstein);
    validate_presentation(P1);

    auto P0 = carlitz_local(F2, parse_poly(F2, "t"), 1);
    EXPECT_EQ(P0.h, upoly(F2, {"t", "1"}));
    EXPECT_EQ(P0.order(), 1U);

    auto P2 = carlitz_local(F3, parse_poly(F3, "t"), 2);
    EXPECT_EQ(P2.degree(), 6);
    EXPECT_EQ(P2.order(), 6U);
    EXPECT_TRUE(P2.eisenstein);
    // Newton polygon of h: single segment of slope -1/6.
    std::vector<std::pair<std::int64_t, std::optional<Rational>>> pts;
    for (std::size_t i = 0; i < P2.h.coeffs().size(); ++i) {
        auto v = P2.h.coeffs()[i].valuation(P2.place);
        pts.emplace_back(static_cast<std::int64_t>(i), v ? std::optional<Rational>(Rational(*v)) : std::nullopt);
    }
    auto np = newton_polygon(pts);
    ASSERT_EQ(np.segments.size(), 1U);
    EXPECT_EQ(np.segments[0].slope, Rational(-1, 6));
    validate_presentation(P2);

    EXPECT_THROW(carlitz_local(F3, parse_poly(F3, "t"), 4, 20), ResourceLimitError);
    EXPECT_THROW(carlitz_local(F3, parse_poly(F3, "t^2+1"), 0), DomainError);
}

TEST(CarlitzLocal, ValidationRejectsBrokenTables) {
    FieldPtr F3 = make_fq(3);
    auto P = carlitz_local(F3, parse_poly(F3, "t"), 2);
    auto bad = P;
    std::swap(bad.table[1][1], bad.table[1][2]);
    EXPECT_THROW(validate_presentation(bad), DomainError);
    auto bad2 = P;
    bad2.sigma[1] = bad2.sigma[1] + UPoly::constant(F3, RationalFn::constant(F3, 1));
    EXPECT_THROW(validate_presentation(bad2), DomainError);
}

TEST(Filtration, CarlitzQ3) {
    FieldPtr F3 = make_fq(3);
    auto f1 = lower_filtration(carlitz_local(F3, parse_poly(F3, "t"), 1));
    EXPECT_EQ(f1.order_at(0), 2U);
    EXPECT_EQ(f1.order_at(1), 1U);
    EXPECT_EQ(f1.lower_breaks, (std::vector<std::int64_t>{0}));

    auto P2 = carlitz_local(F3, parse_poly(F3, "t"), 2);
    auto f2 = lower_filtration(P2);
    EXPECT_EQ(f2.order_at(-1), 6U);
    EXPECT_EQ(f2.order_at(0), 6U);
    EXPECT_EQ(f2.order_at(1), 3U);
    EXPECT_EQ(f2.order_at(2), 3U);
    EXPECT_EQ(f2.order_at(3), 1U);
    EXPECT_EQ(f2.lower_breaks, (std::vector<std::int64_t>{0, 2}));
    for (std::size_t k = 0; k < P2.order(); ++k) {
        if (P2.labels[k] == "t + 1") {
            EXPECT_EQ(f2.i_values[k], 3);
        }
        if (P2.labels[k] == "2") {
            EXPECT_EQ(f2.i_values[k], 1);
        }
    }
}

TEST(Filtration, TrivialGroup) {
    FieldPtr F2 = make_fq(2);
    auto P = carlitz_local(F2, parse_poly(F2, "t"), 1);
    auto f = lower_filtration(P);
    EXPECT_TRUE(f.lower_breaks.empty());
    EXPECT_EQ(maximal_break(P), Rational(-1));
    EXPECT_EQ(maximal_break_by_sum(P), Rational(-1));
}

TEST(Herbrand, Examples) {
    FieldPtr F3 = make_fq(3);
    auto f2 = lower_filtration(carlitz_local(F3, parse_poly(F3, "t"), 2));
    auto phi = herbrand_phi(f2);
    EXPECT_EQ(phi(Rational(2)), Rational(1));
    EXPECT_EQ(phi(Rational(1)), Rational(1, 2));
    EXPECT_EQ(phi(Rational(-1, 2)), Rational(-1, 2));
    auto r = break_report(f2);
    EXPECT_EQ(r.upper_breaks, rationals({0, 1}));
    EXPECT_EQ(r.maximal_break, Rational(1));
    EXPECT_EQ(r.tame_order, 2U);
    EXPECT_EQ(r.wild_order, 3U);

    // Single lower break b with G_0 = ... = G_b: phi(b) = b.
    Filtration single = detail::filtration_from({std::nullopt, 4, 4});
    EXPECT_EQ(single.lower_breaks, (std::vector<std::int64_t>{3}));
    EXPECT_EQ(herbrand_phi(single)(Rational(3)), Rational(3));
}

TEST(Herbrand, InverseConcaveConvex) {
    FieldPtr F2 = make_fq(2), F3 = make_fq(3);
    std::vector<Filtration> fs{lower_filtration(carlitz_local(F3, parse_poly(F3, "t"), 2)),
                               lower_filtration(carlitz_local(F2, parse_poly(F2, "t"), 3)),
                               lower_filtration(carlitz_local(F2, parse_poly(F2, "t^2+t+1"), 2))};
    std::mt19937_64 rng(17);
    for (const auto& f : fs) {
        auto phi = herbrand_phi(f);
        auto psi = herbrand_psi(f);
        for (std::size_t k = 1; k < phi.slopes.size(); ++k) EXPECT_LE(phi.slopes[k], phi.slopes[k - 1]);
        for (std::size_t k = 1; k < psi.slopes.size(); ++k) EXPECT_GE(psi.slopes[k], psi.slopes[k - 1]);
        for (int i = 0; i < 100; ++i) {
            Rational u(static_cast<long long>(rng() % 400) - 100, static_cast<long long>(1 + rng() % 37));
            if (u < -1) continue;
            EXPECT_EQ(psi(phi(u)), u);
            EXPECT_EQ(phi(psi(u)), u);
            EXPECT_EQ(phi(u), herbrand_phi_by_sum(f, u));
        }
    }
}

TEST(MaximalBreak, TwoRoutesAndHasseArf) {
    struct Case {
        std::uint32_t q;
        const char* p;
        std::int64_t m;
        long long expect;
    };
    for (const Case& c : {Case{3, "t", 1, 0}, Case{3, "t", 2, 1}, Case{2, "t", 2, 1}, Case{2, "t", 3, 2}, Case{2, "t", 4, 3},
                          Case{3, "t+1", 2, 1}, Case{4, "t", 1, 0}, Case{4, "t", 2, 1}, Case{5, "t", 1, 0}, Case{2, "t^2+t+1", 1, 0},
                          Case{2, "t^2+t+1", 2, 1}, Case{3, "t^2+1", 1, 0}}) {
        FieldPtr F = make_fq_of_order(c.q);
        auto P = carlitz_local(F, parse_poly(F, c.p), c.m);
        validate_presentation(P);
        auto r = break_report(P);
        EXPECT_EQ(r.maximal_break, Rational(c.expect)) << c.q << " " << c.p << " " << c.m;
        EXPECT_EQ(maximal_break_by_sum(P), r.maximal_break);
        EXPECT_TRUE(hasse_arf_holds(r));
        EXPECT_EQ(r.group_order, P.order());
        // ord D = sum_{i >= 0} (|G_i| - 1) = v_L(h'(x)).
        auto f = lower_filtration(P);
        std::int64_t s = 0;
        for (std::int64_t i = 0; f.order_at(i) > 1; ++i) s += static_cast<std::int64_t>(f.order_at(i)) - 1;
        EXPECT_EQ(r.different, s);
        if (P.order() > 1) {
            EXPECT_EQ(ext_valuation(P.h.derivative(), P.h, P.place), Rational(r.different));
        }
    }
}

TEST(Filtration, IndependentOfUniformizer) {
    // Replace x by x' = x + t x: i(sigma) = v_L(sigma(x') - x') is unchanged.
    FieldPtr F3 = make_fq(3);
    auto P = carlitz_local(F3, parse_poly(F3, "t"), 2);
    auto f = lower_filtration(P);
    const UPoly x = UPoly::x(F3);
    const RationalFn u = parse_rational(F3, "1+t");
    for (std::size_t k = 1; k < P.order(); ++k) {
        UPoly d = (P.sigma[k] - x).scaled(u);
        EXPECT_EQ(ext_valuation(d, P.h, P.place), Rational(*f.i_values[k]));
    }
}
