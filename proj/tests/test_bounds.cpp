#include <gtest/gtest.h>

#include "dkf/bounds.hpp"
#include "dkf/parse.hpp"

using namespace dkf;

namespace {

PrimePlace place_of(const FieldPtr& F, const char* l) { return PrimePlace::finite(parse_poly(F, l)); }

ModuleCase carlitz_case(std::uint32_t q, const char* l, const char* p, std::int64_t m) {
    FieldPtr F = make_fq_of_order(q);
    return {carlitz(F), place_of(F, l), parse_poly(F, p), m};
}

} // namespace

TEST(Calculators, ObviousE) {
    EXPECT_EQ(obvious_e_bound(2, 1, 1), 2);
    EXPECT_EQ(obvious_e_bound(3, 1, 1), 6);
    EXPECT_EQ(obvious_e_bound(2, 2, 1), 24);
    EXPECT_EQ(obvious_e_bound(3, 1, 2), BigInt(362880));
    EXPECT_THROW(obvious_e_bound(2, 4, 4, 1000), ResourceLimitError);
    EXPECT_THROW(obvious_e_bound(2, 0, 1), DomainError);
}

TEST(Calculators, Cprime) {
    EXPECT_EQ(cprime(2, 2), 6);
    EXPECT_EQ(cprime(2, 1), 1);
    EXPECT_EQ(cprime(3, 2), 40320);
    EXPECT_THROW(cprime(5, 5, 100), ResourceLimitError);
}

TEST(Calculators, Prop1) {
    EXPECT_EQ(prop1_break_bound(3, 1, 1, 0, 1, 2), Rational(2));
    EXPECT_EQ(prop1_break_bound(3, 1, 2, 0, 2, 6), Rational(11));
    EXPECT_EQ(prop1_break_bound(3, 1, 0, 0, 1, 1), Rational(0));
    // 2 (1 + 2/(2 * 1) + 1) - 1 = 5
    EXPECT_EQ(prop1_break_bound(2, 2, 1, 2, 1, 2), Rational(5));
    EXPECT_EQ(prop1_break_bound(5, 2, 1, 3, 1, 4), Rational(4) * (Rational(1, 4) + Rational(3, 20) + 1) - 1);
    EXPECT_THROW(prop1_break_bound(3, 1, -1, 0, 1, 2), DomainError);
    EXPECT_THROW(prop1_break_bound(3, 1, 1, -1, 1, 2), DomainError);
    EXPECT_THROW(prop1_break_bound(3, 1, 1, 0, 1, 0), DomainError);
}

TEST(Calculators, Prop2) {
    EXPECT_EQ(prop2_leading_bound(2, 2, 1, 1, 1, 6), Rational(3));
    EXPECT_EQ(prop2_leading_bound(3, 2, 2, 0, 2, 40320), Rational(27 * 4));
    EXPECT_EQ(prop2_leading_bound(3, 1, 1, 1, 3, 2), Rational(7, 4));
    EXPECT_EQ(prop2_leading_bound(2, 3, 1, 0, 1, 5040), Rational(BigInt("2580965130240000")));
    EXPECT_THROW(prop2_leading_bound(2, 2, 1, 1, 0, 6), DomainError);
}

TEST(Calculators, Mythm) {
    EXPECT_EQ(mythm_e_bound(2, 2, 1), 6);
    EXPECT_EQ(mythm_e_bound(2, 2, 2), 10);
    EXPECT_EQ(mythm_e_bound(3, 2, 1), 6);
    EXPECT_EQ(mythm_e_bound(2, 1, 7), 2);
    EXPECT_EQ(mythm_e_bound(2, 3, 1), BigInt("1024192512002"));
    EXPECT_EQ(mythm_break_bound(2, 2, 1), 41);
    EXPECT_EQ(mythm_break_bound(2, 2, 2), 249);
    EXPECT_EQ(mythm_break_bound(3, 2, 1), 241925);
    EXPECT_EQ(mythm_break_bound(3, 2, 2), 1612809);
    EXPECT_EQ(mythm_break_bound(2, 3, 1), BigInt("5162954453002081"));
    EXPECT_THROW(mythm_break_bound(2, 1, 1), DomainError);
    EXPECT_TRUE(mythm_exponent(2).ceiling);
    EXPECT_EQ(mythm_exponent(2).value, 1);
    EXPECT_FALSE(mythm_exponent(3).ceiling);
    EXPECT_EQ(mythm_exponent(3).value, 1);
    EXPECT_EQ(mythm_exponent(4).value, 3);
    const std::vector<BigInt> expect{41, 249, 769, 1745, 3321};
    for (int N = 1; N <= 5; ++N) EXPECT_EQ(mythm_break_bound(2, 2, N), expect[static_cast<std::size_t>(N - 1)]);
}

TEST(Calculators, MonotoneInEachArgument) {
    for (std::uint32_t q : {2U, 3U})
        for (std::int64_t r : {2, 3})
            for (int N = 1; N < 5; ++N) {
                EXPECT_LT(mythm_e_bound(q, r, N), mythm_e_bound(q, r, N + 1));
                EXPECT_LT(mythm_break_bound(q, r, N), mythm_break_bound(q, r, N + 1));
                EXPECT_LT(prop2_leading_bound(q, r, 1, 0, N, cprime(q, r)), prop2_leading_bound(q, r, 1, 0, N + 1, cprime(q, r)));
            }
    for (int v = 0; v < 4; ++v)
        for (int e = 1; e < 4; ++e) {
            EXPECT_LE(prop1_break_bound(3, 2, v, 1, 1, e), prop1_break_bound(3, 2, v + 1, 1, 1, e));
            EXPECT_LE(prop1_break_bound(3, 2, 1, v, 1, e), prop1_break_bound(3, 2, 1, v + 1, 1, e));
            EXPECT_LE(prop1_break_bound(3, 2, 1, v, 1, e), prop1_break_bound(3, 2, 1, v, 1, e + 1));
        }
}

TEST(Calculators, Gardeyn) {
    EXPECT_EQ(gardeyn_different_bound({NormValue(Rational(5), 1)}, {Rational(0)}, 3), Rational(1));
    // c = (1, q), v = (0, q - 1): 1 + 2 q (q - 1) q
    for (std::uint32_t q : {2U, 3U}) {
        const Rational got = gardeyn_different_bound({NormValue(Rational(1), 1), NormValue(Rational(q), 1)}, {Rational(0), Rational(q - 1)}, q);
        EXPECT_EQ(got, Rational(1 + 2 * q * (q - 1) * q));
    }
    // c = (1, 2^{1/2}): the product 2^{1/2} is replaced by 2.
    EXPECT_EQ(gardeyn_different_bound({NormValue(Rational(1), 2), NormValue(Rational(2), 2)}, {Rational(0), Rational(1)}, 2), Rational(9));
    EXPECT_THROW(gardeyn_different_bound({NormValue(Rational(1), 1), NormValue(Rational(2), 2)}, {Rational(0), Rational(1)}, 2), DomainError);
    EXPECT_THROW(gardeyn_different_bound({NormValue(Rational(1), 1)}, {}, 2), DomainError);
}

TEST(Calculators, TameBaseChange) {
    EXPECT_EQ(tame_basechange_break_bound(0, 4), Rational(0));
    EXPECT_EQ(tame_basechange_break_bound(1, 3), Rational(3));
    EXPECT_EQ(tame_basechange_break_bound(-1, 5), Rational(-1));
    EXPECT_EQ(tame_basechange_break_bound(Rational(1, 2), 2), Rational(1));
    EXPECT_THROW(tame_basechange_break_bound(-2, 1), DomainError);
    EXPECT_EQ(tame_constant(2, 2), 3);
    EXPECT_EQ(tame_constant(3, 2), 8);
    EXPECT_EQ(tame_constant(2, 3), 21);
}

TEST(Certify, CarlitzLevels) {
    CertificationProfile prof;
    auto r1 = certify(carlitz_case(3, "t", "t", 1), prof);
    EXPECT_EQ(r1.exact_break, Rational(0));
    EXPECT_EQ(r1.prop1_bound, Rational(2));
    EXPECT_EQ(r1.e.provenance, "exact");
    EXPECT_EQ(*r1.prop1_bound_obvious, Rational(8));
    EXPECT_TRUE(r1.verdict);

    auto r2 = certify(carlitz_case(3, "t", "t", 2), prof);
    EXPECT_EQ(r2.exact_break, Rational(1));
    EXPECT_EQ(r2.prop1_bound, Rational(11));
    EXPECT_EQ(r2.e.value, Rational(6));
    EXPECT_TRUE(r2.verdict);
    ASSERT_TRUE(r2.breaks.has_value());
    EXPECT_EQ(r2.breaks->lower_breaks, (std::vector<std::int64_t>{0, 2}));
}

TEST(Certify, SoundOnEveryCarlitzLocalCase) {
    CertificationProfile prof;
    struct Case {
        std::uint32_t q;
        const char* p;
        std::int64_t m;
    };
    for (const Case& c : {Case{2, "t", 1}, Case{2, "t", 2}, Case{2, "t", 3}, Case{3, "t", 1}, Case{3, "t", 2}, Case{3, "t+1", 2}, Case{4, "t", 2},
                          Case{2, "t^2+t+1", 2}, Case{5, "t", 1}}) {
        auto r = certify(carlitz_case(c.q, c.p, c.p, c.m), prof);
        ASSERT_TRUE(r.exact_break.has_value());
        EXPECT_LE(*r.exact_break, r.prop1_bound);
        EXPECT_LE(*r.exact_break, *r.prop1_bound_obvious);
        EXPECT_TRUE(r.verdict) << c.q << " " << c.p << " " << c.m;
    }
}

TEST(Certify, UnramifiedPrimeUsesObviousBound) {
    auto r = certify(carlitz_case(3, "t", "t+1", 1), CertificationProfile{});
    EXPECT_FALSE(r.exact_break.has_value());
    EXPECT_EQ(r.e.provenance, "obvious");
    EXPECT_EQ(r.v_pm, Rational(0));
    // 6 (0 + 0 + 1) - 1
    EXPECT_EQ(r.prop1_bound, Rational(5));
    EXPECT_TRUE(r.verdict);
}

TEST(Certify, TateRankTwo) {
    FieldPtr F2 = make_fq(2);
    TateCase tc{TateDatum(carlitz(F2), place_of(F2, "t"), parse_rational(F2, "1/t+1")), parse_poly(F2, "t"), 1};
    CertificationProfile prof;
    prof.N.emplace_back(place_of(F2, "t"), 1);
    auto r = certify(tc, prof);
    EXPECT_EQ(r.rank, 2);
    EXPECT_EQ(*r.prop2_bound, Rational(3));
    EXPECT_EQ(*r.mythm_e, 6);
    EXPECT_EQ(*r.mythm_break, 41);
    EXPECT_EQ(r.e.provenance, "mythm");
    EXPECT_FALSE(r.exact_break.has_value());
    // v(g_2) = -(q - 1) v(gamma)
    EXPECT_EQ(r.v_a->value, Rational(1));
    EXPECT_TRUE(r.verdict);

    // Covolume 2 does not fit under N = 1.
    TateCase big{TateDatum(carlitz(F2), place_of(F2, "t"), parse_rational(F2, "1/t^2+1")), parse_poly(F2, "t"), 1};
    auto rb = certify(big, prof);
    EXPECT_FALSE(rb.verdict);
    auto rb2 = certify(big, CertificationProfile{});
    EXPECT_EQ(*rb2.N, 2);
    EXPECT_EQ(rb2.v_a->value, Rational(2));
    EXPECT_TRUE(rb2.verdict);
}

TEST(Certify, TateSeededRunsProductFormula) {
    FieldPtr F2 = make_fq(2);
    TateCase tc{TateDatum::from_seed(carlitz(F2), place_of(F2, "t"), parse_poly(F2, "t"), 1, parse_rational(F2, "(t+1)/t^2")), parse_poly(F2, "t"), 1};
    auto r = certify(tc, CertificationProfile{});
    bool saw = false;
    for (const auto& c : r.checks)
        if (c.name == "product_formula_defect") {
            saw = true;
            EXPECT_TRUE(c.holds) << c.detail;
        }
    EXPECT_TRUE(saw);
    EXPECT_TRUE(r.verdict);
}

TEST(Certify, ProfileGuards) {
    CertificationProfile prof;
    prof.r = 1;
    FieldPtr F2 = make_fq(2);
    TateCase tc{TateDatum(carlitz(F2), place_of(F2, "t"), parse_rational(F2, "1/t+1")), parse_poly(F2, "t"), 1};
    EXPECT_THROW(certify(tc, prof), DomainError);
    CertificationProfile bad;
    bad.N.emplace_back(place_of(F2, "t"), 0);
    EXPECT_THROW(certify(carlitz_case(2, "t", "t", 1), bad), DomainError);
    EXPECT_THROW(certify(carlitz_case(2, "t", "t", 0), CertificationProfile{}), DomainError);
}
