#include <gtest/gtest.h>

#include "dkf/tate.hpp"

using namespace dkf;

namespace {

PrimePlace place_of(const FieldPtr& F, const char* l) { return PrimePlace::finite(parse_poly(F, l)); }

RationalFn fn(const FieldPtr& F, const char* s) { return parse_rational(F, s); }

DrinfeldModule<RationalFn> module(const FieldPtr& F, const char* phi_t) { return make_drinfeld(F, parse_ore(F, phi_t).coeffs()); }

// Coefficients of X prod_{lambda}(1 - X/lambda) through X^{max_deg}, multiplied out
// as an ordinary polynomial.
std::vector<LocalElem> direct_product(const LocalFieldPtr& K, const std::vector<LocalElem>& points, std::size_t max_deg, std::int64_t R) {
    std::vector<LocalElem> poly{K->zero(), K->one()};
    for (const auto& lam : points) {
        LocalElem c = -detail::rel_inverse(lam, R);
        std::vector<LocalElem> next(std::min(poly.size() + 1, max_deg + 1), K->zero());
        for (std::size_t i = 0; i < poly.size() && i < next.size(); ++i) {
            next[i] += poly[i];
            if (i + 1 < next.size()) next[i + 1] += (poly[i] * c).truncated(R);
        }
        poly = std::move(next);
    }
    return poly;
}

} // namespace

TEST(LatticePoints, Examples) {
    FieldPtr F2 = make_fq(2);
    TateDatum d(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t"));
    const NormValue c1 = covolume_of_phi(d);
    EXPECT_EQ(c1, NormValue(1, 1));
    auto one = lattice_points(d, c1);
    ASSERT_EQ(one.size(), 1U);
    EXPECT_EQ(one[0].valuation(), -1);
    EXPECT_TRUE(one[0].agrees_with(d.gamma_local(30)));

    auto two = lattice_points(d, NormValue::q_power(2, 1) * c1);
    ASSERT_EQ(two.size(), 3U);
    // a = t, a = t + 1
    EXPECT_EQ(two[1].valuation(), -2);
    EXPECT_EQ(two[2].valuation(), -2);
    const LocalFieldPtr& K = d.local_field();
    LocalElem g = d.gamma_local(30);
    LocalElem psi_t_g = K->t_expansion(30) * g + g.frob();
    EXPECT_TRUE(two[1].agrees_with(psi_t_g));
    EXPECT_TRUE(two[2].agrees_with(psi_t_g + g));

    EXPECT_THROW(lattice_points(d, NormValue(Rational(1, 2), 1)), DomainError);
}

TEST(LatticePoints, ValuationLaw) {
    for (std::uint32_t q : {2U, 3U}) {
        FieldPtr F = make_fq(q);
        for (const char* phi : {"t + tau", "t + tau^2", "t + t*tau + tau^2"}) {
            for (const char* gamma : {"1/t", "1/t^2", "(t+1)/t^3"}) {
                TateDatum d(module(F, phi), place_of(F, "t"), fn(F, gamma));
                const std::int64_t r = d.r_psi();
                auto pts = lattice_points(d, NormValue::q_power(q, 3) * covolume_of_phi(d), 10);
                for (std::size_t code = 1; code <= pts.size(); ++code) {
                    std::int64_t deg = 0;
                    for (std::size_t c = code; c >= q; c /= q) ++deg;
                    std::int64_t expect = d.gamma_valuation();
                    for (std::int64_t i = 0; i < r * deg; ++i) expect *= q;
                    EXPECT_EQ(pts[code - 1].valuation(), expect) << phi << " " << gamma << " code " << code;
                }
            }
        }
    }
}

TEST(ExpSeries, SingleLayerExample) {
    // One layer: X prod_{c != 0}(1 - X/(c gamma)) = X - gamma^{1-q} X^q = X + t X^2.
    FieldPtr F2 = make_fq(2);
    TateDatum d(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t"));
    LatticeExponential ex(d, 30);
    LocalElem beta = ex.layer_inverse(0).pow(1);
    EXPECT_TRUE(beta.agrees_with(d.local_field()->uniformizer()));
    auto s = exp_series(d, 3, 30);
    EXPECT_EQ(s.coeffs[0], d.local_field()->one().truncated(30));
    EXPECT_EQ(s.precision, 30);
    EXPECT_EQ(s.coeffs[1].valuation(), 1);
}

TEST(ExpSeries, MatchesDirectProductOverLatticePoints) {
    struct Case {
        std::uint32_t q;
        const char* gamma;
        std::int64_t max_deg; // points with deg a <= max_deg; the rest have v(1/lambda) >= 30
    };
    for (const Case& c : {Case{2, "1/t", 4}, Case{3, "1/t", 3}, Case{2, "(1+t)/t^2", 3}}) {
        FieldPtr F = make_fq(c.q);
        TateDatum d(carlitz(F), place_of(F, "t"), fn(F, c.gamma));
        const std::int64_t P = 30;
        auto s = exp_series(d, 3, P);
        auto pts = lattice_points(d, NormValue::q_power(c.q, c.max_deg) * covolume_of_phi(d), P + 10);
        const std::size_t top = static_cast<std::size_t>(c.q * c.q * c.q);
        auto poly = direct_product(d.local_field(), pts, top, P + 10);
        std::size_t qi = 1;
        for (std::size_t j = 0; j <= 3; ++j, qi *= c.q) {
            EXPECT_TRUE(poly[qi].agrees_with(s.coeffs[j]) || (poly[qi] - s.coeffs[j]).valuation_floor() >= P)
                << "q=" << c.q << " gamma=" << c.gamma << " j=" << j;
        }
        // The product is F_q-linear: non-q-power coefficients vanish.
        qi = 1;
        for (std::size_t n = 1; n <= top; ++n) {
            if (n == qi) {
                qi *= c.q;
                continue;
            }
            EXPECT_GE(poly[n].valuation_floor(), P) << "n=" << n;
        }
    }
}

TEST(ExpSeries, StableUnderLargerPrecision) {
    FieldPtr F2 = make_fq(2);
    TateDatum d(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t"));
    auto a = exp_series(d, 3, 30);
    auto b = exp_series(d, 3, 45);
    EXPECT_GE(b.norm_bound, a.norm_bound);
    for (std::size_t j = 0; j <= 3; ++j) EXPECT_EQ(a.coeffs[j], b.coeffs[j].truncated(30));
}

TEST(Reconstruct, CarlitzRankTwo) {
    FieldPtr F2 = make_fq(2);
    TateDatum d(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t"));
    auto rec = reconstruct_phi(d, 30, 8);
    EXPECT_EQ(rec.phi.rank(), 2);
    EXPECT_GE(rec.defect, 28);
    ReductionData rd = stable_model(rec.phi, d.place());
    EXPECT_EQ(rd.r_psi, 1);
    EXPECT_EQ(rd.type, ReductionData::Type::stable_bad);
    // Functional equation for a = t^2 as well.
    const std::size_t D = 8;
    auto psi_t2 = d.psi().phi_of(parse_poly(F2, "t^2"));
    std::vector<LocalElem> psi_loc;
    for (const auto& c : psi_t2.coeffs()) psi_loc.push_back(d.local_field()->complete(c, 40));
    auto lhs = detail::ore_product(rec.series.coeffs, psi_loc, D);
    auto rhs = detail::ore_product(rec.phi.phi_of(parse_poly(F2, "t^2")).coeffs(), rec.series.coeffs, D);
    for (std::size_t n = 0; n <= D; ++n) EXPECT_GE((lhs[n] - rhs[n]).valuation_floor(), 28) << n;
}

TEST(Reconstruct, RanksAndReductionAcrossData) {
    struct Case {
        std::uint32_t q;
        const char* psi;
        const char* gamma;
        const char* place;
    };
    for (const Case& c : {Case{2, "t + tau", "1/t^2", "t"}, Case{3, "t + tau", "1/t", "t"}, Case{3, "t + tau", "(t+2)/t^2", "t"},
                          Case{2, "t + tau + tau^2", "1/t", "t"}, Case{2, "t + tau", "1/(t^2+t+1)", "t^2+t+1"},
                          Case{3, "t + tau", "1/(t+1)", "t+1"}}) {
        FieldPtr F = make_fq(c.q);
        TateDatum d(module(F, c.psi), place_of(F, c.place), fn(F, c.gamma));
        auto rec = reconstruct_phi(d, 30, 8);
        EXPECT_EQ(rec.phi.rank(), d.r_psi() + 1) << c.psi << " " << c.gamma;
        EXPECT_GE(rec.defect, 28) << c.psi << " " << c.gamma;
        ReductionData rd = stable_model(rec.phi, d.place());
        EXPECT_EQ(rd.r_psi, d.r_psi());
        EXPECT_EQ(rd.type, ReductionData::Type::stable_bad);
    }
}

TEST(ProductFormula, CarlitzAtT) {
    FieldPtr F2 = make_fq(2);
    const PolyA p = parse_poly(F2, "t");
    TateDatum d = TateDatum::from_seed(carlitz(F2), place_of(F2, "t"), p, 1, fn(F2, "1/t"));
    // gamma = s^2 + t s
    EXPECT_EQ(d.gamma(), fn(F2, "1/t^2 + 1"));
    auto rep = product_formula_check(d, p, 1, 30);
    EXPECT_EQ(rep.representatives, 4U);
    EXPECT_GE(rep.defect, 28);
    EXPECT_TRUE(rep.floor_holds);
    EXPECT_EQ(rep.valuation_floor, Rational(-1));
    EXPECT_TRUE(rep.lhs.agrees_with(rep.rhs));
}

TEST(ProductFormula, RationalRepresentativeCases) {
    struct Case {
        std::uint32_t q;
        const char* psi;
        const char* p;
        std::int64_t m;
        const char* s;
        std::size_t count;
    };
    for (const Case& c : {Case{3, "t + tau", "t+2", 1, "1/t", 9}, Case{2, "t + tau", "t+1", 1, "1/t", 4},
                          Case{2, "t + tau", "t", 1, "(t+1)/t^2", 4}}) {
        FieldPtr F = make_fq(c.q);
        const PolyA p = parse_poly(F, c.p);
        TateDatum d = TateDatum::from_seed(module(F, c.psi), place_of(F, "t"), p, c.m, fn(F, c.s));
        auto rep = product_formula_check(d, p, c.m, 30);
        EXPECT_EQ(rep.representatives, c.count) << c.p << "^" << c.m;
        EXPECT_GE(rep.defect, 28) << c.p << "^" << c.m;
        EXPECT_TRUE(rep.floor_holds);
    }
}

TEST(ProductFormula, IrrationalTorsionIsRejected) {
    // psi_t = t X + X^3 at (t): the nonzero roots have valuation 1/2.
    FieldPtr F3 = make_fq(3);
    const PolyA p = parse_poly(F3, "t");
    TateDatum d = TateDatum::from_seed(carlitz(F3), place_of(F3, "t"), p, 1, fn(F3, "1/t"));
    EXPECT_THROW(product_formula_check(d, p, 1, 30), DomainError);
    // psi_{t+1}: X^2 = -(t+1) has no root since -1 is not a square mod 3.
    const PolyA p1 = parse_poly(F3, "t+1");
    TateDatum d1 = TateDatum::from_seed(carlitz(F3), place_of(F3, "t"), p1, 1, fn(F3, "1/t"));
    EXPECT_THROW(product_formula_check(d1, p1, 1, 30), DomainError);
}

TEST(RationalTorsion, RootsAreRoots) {
    FieldPtr F3 = make_fq(3);
    auto K = LocalField::make(place_of(F3, "t"));
    auto tp = complete(torsion_poly(carlitz(F3), parse_poly(F3, "t+2")), K, 40);
    auto roots = rational_torsion(tp, 30);
    EXPECT_EQ(roots.size(), 3U);
    for (const auto& x : roots) EXPECT_GE(detail::additive_sum(tp.coeffs, x).valuation_floor(), 30);
    // Level (t+2)^2 needs the unramified extension where t has order 3 mod (t-1)^2.
    auto tp2 = complete(torsion_poly(carlitz(F3), parse_poly(F3, "(t+2)^2")), K, 40);
    EXPECT_THROW(rational_torsion(tp2, 30), DomainError);
}

TEST(Covolume, OfPhi) {
    FieldPtr F2 = make_fq(2);
    EXPECT_EQ(covolume_of_phi(TateDatum(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t"))), NormValue(1, 1));
    EXPECT_EQ(covolume_of_phi(TateDatum(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t^8"))).to_string(), "(8,1)");
    NormValue r2 = covolume_of_phi(TateDatum(module(F2, "t + tau + tau^2"), place_of(F2, "t"), fn(F2, "1/t^8")));
    EXPECT_EQ(r2.to_string(), "(8,2)");
    EXPECT_LT(NormValue(2, 1), r2);
    EXPECT_LT(r2, NormValue(3, 1));
}

TEST(TateDatum, Guards) {
    FieldPtr F2 = make_fq(2);
    EXPECT_THROW(TateDatum(carlitz(F2), place_of(F2, "t"), fn(F2, "t")), DomainError);
    EXPECT_THROW(TateDatum(carlitz(F2), place_of(F2, "t"), fn(F2, "1")), DomainError);
    EXPECT_THROW(TateDatum(module(F2, "t + t*tau"), place_of(F2, "t"), fn(F2, "1/t")), DomainError);
    EXPECT_THROW(TateDatum(module(F2, "t + 1/t*tau + tau^2"), place_of(F2, "t"), fn(F2, "1/t")), DomainError);
    EXPECT_THROW(exp_series(TateDatum(carlitz(F2), place_of(F2, "t"), fn(F2, "1/t")), 0, 30), DomainError);
}

TEST(TateLine, Parse) {
    auto spec = parse_tate_line("q=2; phi_t = carlitz; gamma = 1/t; place = t");
    EXPECT_EQ(spec.datum.gamma_valuation(), -1);
    auto seeded = parse_tate_line("q=3; phi_t = t + tau; s = 1/t; p = t+2; m = 1; place = t");
    ASSERT_TRUE(seeded.p.has_value());
    EXPECT_EQ(seeded.datum.gamma_valuation(), -3);
    EXPECT_THROW(parse_tate_line("q=2; phi_t = carlitz; gamma = 1/t; place = t^2+1"), ParseError);
    EXPECT_THROW(parse_tate_line("q=2; phi_t = carlitz; place = t"), InputError);
}
