#include <gtest/gtest.h>

#include <random>

#include "dkf/drinfeld.hpp"
#include "oracles.hpp"

using namespace dkf;

namespace {

RationalFn R(const FieldPtr& F, const char* s) { return parse_rational(F, s); }

std::map<Rational, std::int64_t> slope_multiset(const NewtonPolygon& np) {
    std::map<Rational, std::int64_t> out;
    for (const auto& [s, len] : np.root_valuations()) out[s] += len;
    return out;
}

} // namespace

TEST(OreMul, CommutationRule) {
    FieldPtr F = make_fq(2);
    RationalFn zero = RationalFn::constant(F, 0), one = RationalFn::constant(F, 1);
    OreF tau = OreF::tau_power(one, 1);
    RationalFn c = R(F, "t+1");
    OreF ctau = OreF(zero, {zero, c});
    EXPECT_EQ(tau * ctau, OreF(zero, {zero, zero, c.pow(2)}));
    OreF ttau = OreF(zero, {zero, R(F, "t")});
    EXPECT_EQ(ttau * ttau, OreF(zero, {zero, zero, R(F, "t^3")}));
    EXPECT_EQ(ttau * OreF::scalar(one), ttau);
    EXPECT_THROW(ttau * OreF::scalar(RationalFn::constant(make_fq(3), 1)), InputError);
}

TEST(OreMul, DegreeAdditivityRandomized) {
    std::mt19937_64 rng(4);
    for (std::uint32_t q : {2U, 3U}) {
        FieldPtr F = make_fq(q);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<RationalFn> a, b;
            for (int i = 0; i <= static_cast<int>(rng() % 4); ++i) a.emplace_back(oracle::random_nonzero_poly(F, 2, rng));
            for (int i = 0; i <= static_cast<int>(rng() % 4); ++i) b.emplace_back(oracle::random_nonzero_poly(F, 2, rng));
            OreF f(RationalFn::constant(F, 0), a), g(RationalFn::constant(F, 0), b);
            EXPECT_EQ((f * g).degree(), f.degree() + g.degree());
        }
    }
}

TEST(PhiOf, Examples) {
    FieldPtr F3 = make_fq(3);
    auto C = carlitz(F3);
    OreF c = C.phi_of(PolyA::constant(F3, 2));
    EXPECT_EQ(c.degree(), Degree(0));
    EXPECT_EQ(c.coeff(0), RationalFn::constant(F3, 2));
    OreF t2 = C.phi_of(parse_poly(F3, "t^2"));
    ASSERT_EQ(t2.coeffs().size(), 3U);
    EXPECT_EQ(t2.coeff(0), R(F3, "t^2"));
    EXPECT_EQ(t2.coeff(1), R(F3, "t^3+t"));
    EXPECT_EQ(t2.coeff(2), R(F3, "1"));

    FieldPtr F2 = make_fq(2);
    auto phi = parse_module_line("q=2; r=2; phi_t = t + (t+1)*tau + t^2*tau^2").phi;
    OreF pt = phi.phi_of(PolyA::t(F2));
    EXPECT_EQ(pt.coeffs(), (std::vector<RationalFn>{R(F2, "t"), R(F2, "t+1"), R(F2, "t^2")}));
    EXPECT_THROW(phi.phi_of(PolyA(F2)), DomainError);
}

TEST(TorsionPoly, Examples) {
    FieldPtr F2 = make_fq(2);
    auto tp = torsion_poly(carlitz(F2), PolyA::t(F2));
    EXPECT_EQ(tp.coeffs, (std::vector<RationalFn>{R(F2, "t"), R(F2, "1")}));

    FieldPtr F3 = make_fq(3);
    auto tp2 = torsion_poly(carlitz(F3), parse_poly(F3, "t^2"));
    EXPECT_EQ(tp2.coeffs, (std::vector<RationalFn>{R(F3, "t^2"), R(F3, "t^3+t"), R(F3, "1")}));
    EXPECT_EQ(tp2.initial(), R(F3, "t^2"));
    EXPECT_EQ(tp2.root_count(), 9);

    auto phi = parse_module_line("q=2; r=2; phi_t = t + tau + t*tau^2").phi;
    auto tp3 = torsion_poly(phi, PolyA::t(F2));
    EXPECT_EQ(tp3.coeffs, (std::vector<RationalFn>{R(F2, "t"), R(F2, "1"), R(F2, "t")}));
    EXPECT_EQ(tp3.leading(), R(F2, "t"));
}

TEST(PhiOf, HomomorphismRandomized) {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (std::uint32_t q : {2U, 3U}) {
        FieldPtr F = make_fq(q);
        while (checked < (q == 2 ? 100 : 200)) {
            const int r = 1 + static_cast<int>(rng() % 3);
            const int da = static_cast<int>(rng() % 4), db = static_cast<int>(rng() % 4);
            std::vector<RationalFn> g{RationalFn::t(F)};
            for (int i = 1; i <= r; ++i) {
                PolyA c = i == r ? oracle::random_nonzero_poly(F, 1, rng) : oracle::random_poly(F, 1, rng);
                g.emplace_back(c);
            }
            auto phi = make_drinfeld(F, g);
            PolyA a = oracle::random_poly(F, da, rng), b = oracle::random_poly(F, db, rng);
            if (a.is_zero() || b.is_zero() || (a + b).is_zero()) continue;
            EXPECT_EQ(phi.phi_of(a * b), phi.phi_of(a) * phi.phi_of(b));
            EXPECT_EQ(phi.phi_of(a + b), phi.phi_of(a) + phi.phi_of(b));
            EXPECT_EQ(phi.phi_of(a).degree(), Degree(r * a.degree().value()));
            EXPECT_EQ(phi.phi_of(a).coeff(0), RationalFn(a));
            ++checked;
        }
    }
}

TEST(NewtonPolygon, CarlitzSlopesMatchRootStructure) {
    for (std::uint32_t q : {2U, 3U, 4U}) {
        FieldPtr F = make_fq_of_order(q);
        PrimePlace l = PrimePlace::finite(PolyA::t(F));
        auto C = carlitz(F);
        for (int d = 1; d <= 2; ++d) {
            std::uint64_t count = 1;
            for (int i = 0; i <= d; ++i) count *= q;
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                std::vector<FqCode> v;
                std::uint64_t x = idx;
                for (int i = 0; i <= d; ++i) { v.push_back(static_cast<FqCode>(x % q)); x /= q; }
                if (v.back() == 0) continue;
                PolyA a(F, v);
                auto np = torsion_newton_polygon(torsion_poly(C, a), l);
                EXPECT_EQ(slope_multiset(np), oracle::carlitz_root_valuations_at_t(q, a)) << "q=" << q << " a=" << a.to_string();
            }
        }
    }
}

TEST(StableModel, Examples) {
    FieldPtr F = make_fq(3);
    PrimePlace l = PrimePlace::finite(parse_poly(F, "t+1"));
    auto bad = parse_module_line("q=3; phi_t = t + tau + (t+1)*tau^2").phi;
    auto rd = stable_model(bad, l);
    EXPECT_EQ(rd.mu, Rational(0));
    EXPECT_EQ(rd.r_psi, 1);
    EXPECT_EQ(rd.type, ReductionData::Type::stable_bad);

    auto good = parse_module_line("q=3; phi_t = t + t*tau + 2*tau^2").phi;
    auto rg = stable_model(good, l);
    EXPECT_EQ(rg.mu, Rational(0));
    EXPECT_EQ(rg.r_psi, 2);
    EXPECT_EQ(rg.type, ReductionData::Type::good);

    auto pot = parse_module_line("q=3; phi_t = t + (1/(t+1))*tau").phi;
    auto rp = stable_model(pot, l);
    EXPECT_EQ(rp.mu, Rational(-1, 2));
    EXPECT_EQ(rp.type, ReductionData::Type::potentially_stable);
    EXPECT_EQ(rp.tame_degree, 2);
    EXPECT_FALSE(rp.twist_exponents.has_value());

    // q = 2: the slope -1/(q-1) is integral and the twist is attainable.
    FieldPtr F2 = make_fq(2);
    auto pot2 = parse_module_line("q=2; phi_t = t + (1/t)*tau").phi;
    auto r2 = stable_model(pot2, PrimePlace::finite(PolyA::t(F2)));
    EXPECT_EQ(r2.mu, Rational(-1));
    EXPECT_EQ(r2.tame_degree, 1);
    EXPECT_EQ(r2.type, ReductionData::Type::good);
}

TEST(StableModel, TwistIsIntegralWithUnitLeadingResidue) {
    std::mt19937_64 rng(77);
    for (std::uint32_t q : {2U, 3U}) {
        FieldPtr F = make_fq(q);
        PrimePlace l = PrimePlace::finite(PolyA::t(F));
        for (int trial = 0; trial < 60; ++trial) {
            const int r = 1 + static_cast<int>(rng() % 3);
            std::vector<RationalFn> g{RationalFn::t(F)};
            for (int i = 1; i <= r; ++i) {
                PolyA num = oracle::random_nonzero_poly(F, 2, rng);
                PolyA den = PolyA::t(F).pow(rng() % 3);
                g.emplace_back(num * PolyA::t(F).pow(rng() % 3), den);
            }
            auto phi = make_drinfeld(F, g);
            auto rd = stable_model(phi, l);
            ASSERT_GE(rd.r_psi, 1);
            ASSERT_LE(rd.r_psi, r);
            BigInt d = tame_lcm_d(F, r);
            EXPECT_EQ(d % denominator(rd.mu), 0);
            if (!rd.twist_exponents) continue;
            auto tw = twisted_coefficients(phi, rd);
            for (std::int64_t i = 1; i <= r; ++i) {
                auto v = tw[static_cast<std::size_t>(i)].valuation(l);
                if (v) {
                    EXPECT_GE(*v, 0);
                }
            }
            EXPECT_EQ(tw[static_cast<std::size_t>(rd.r_psi)].valuation(l), 0);
        }
    }
}

TEST(TorsionValuationBounds, Examples) {
    FieldPtr F3 = make_fq(3);
    PrimePlace t = PrimePlace::finite(PolyA::t(F3));
    auto b = torsion_valuation_bounds(carlitz(F3), t, t, 1);
    EXPECT_EQ(b.upper, Rational(1, 2));
    EXPECT_EQ(b.lower, Rational(0));
    auto np = torsion_newton_polygon(torsion_poly(carlitz(F3), PolyA::t(F3)), t);
    EXPECT_EQ(np.root_valuations().front().first, Rational(1, 2));

    PrimePlace t1 = PrimePlace::finite(parse_poly(F3, "t+1"));
    auto b2 = torsion_valuation_bounds(carlitz(F3), t1, t, 2);
    EXPECT_EQ(b2.upper, Rational(0));
    EXPECT_EQ(b2.lower, Rational(0));

    auto pot = parse_module_line("q=3; phi_t = t + (1/t)*tau").phi;
    EXPECT_THROW(torsion_valuation_bounds(pot, t, t, 1), DomainError);
}

TEST(TorsionValuationBounds, SlopesWithinBoundsOnCorpus) {
    std::mt19937_64 rng(31);
    for (std::uint32_t q : {2U, 3U}) {
        FieldPtr F = make_fq(q);
        std::vector<PrimePlace> places;
        for (const auto& p : enumerate_irreducibles(F, 1)) places.push_back(PrimePlace::finite(p));
        places.push_back(PrimePlace::finite(enumerate_irreducibles(F, 2).front()));
        for (int trial = 0; trial < 25; ++trial) {
            const int r = 1 + static_cast<int>(rng() % 2);
            std::vector<RationalFn> g{RationalFn::t(F)};
            for (int i = 1; i <= r; ++i) g.emplace_back(i == r ? oracle::random_nonzero_poly(F, 1, rng) : oracle::random_poly(F, 1, rng));
            auto phi = make_drinfeld(F, g);
            for (const auto& l : places) {
                for (const auto& p : places) {
                    const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 2);
                    if (r * p.degree() * m > 4) continue;
                    auto bounds = torsion_valuation_bounds(phi, l, p, m);
                    auto tp = torsion_poly(phi, p.generator().pow(static_cast<std::uint64_t>(m)));
                    for (const auto& [s, len] : torsion_newton_polygon(tp, l).root_valuations()) {
                        EXPECT_LE(s, bounds.upper);
                        EXPECT_GE(s, bounds.lower);
                    }
                }
            }
        }
    }
}

TEST(ModuleLine, ParseErrors) {
    EXPECT_THROW(parse_module_line("q=3; phi_t = t + * tau"), ParseError);
    EXPECT_THROW(parse_module_line("q=3; r=2; phi_t = t + tau"), ParseError);
    EXPECT_THROW(parse_module_line("q=3; phi_t = 1 + tau"), ParseError);
    EXPECT_THROW(parse_module_line("phi_t = t + tau"), InputError);
    try {
        parse_module_line("q=3; phi_t = t + * tau");
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 17U);
    }
}
