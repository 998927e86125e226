#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "archheight/bound_engine.hpp"
#include "archheight/input.hpp"
#include "oracles.hpp"

using namespace archheight;
using archheight::oracle::Rng;

namespace {

CurveModel<double> curve(const char* text) {
    return CurveModel<double>::from_a_invariants(parse_curve_list(text));
}

double sup_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

}  // namespace

TEST(PhiStep, ClosedFormExamples) {
    const auto c = curve("[0,0,0,1,0]");
    const auto tc_c = torsion_constants(c, complex_place);
    const auto tc_r = torsion_constants(c, real_place);
    const auto vc = phi_step(tc_c, 1.0, 1.0, Variant::complex_formula);
    EXPECT_NEAR(vc[0], oracle::closed_form_phi_complex(), 1e-14);
    EXPECT_NEAR(vc[1], oracle::closed_form_phi_complex(), 1e-14);
    EXPECT_NEAR(vc[0], 1.098684, 1e-6);
    const auto vr = phi_step(tc_r, 1.0, 1.0, Variant::real_one_component);
    EXPECT_NEAR(vr[0], oracle::closed_form_phi_real(), 1e-14);
    EXPECT_NEAR(vr[1], oracle::closed_form_phi_real(), 1e-14);
    EXPECT_NEAR(vr[0], 1.046233, 1e-6);
}

TEST(PhiStep, HomogeneousOfDegreeQuarter) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto tc = torsion_constants(oracle::random_complex_curve(rng), complex_place);
        const double d1 = rng.uniform(0, 5), d2 = rng.uniform(0, 5);
        const auto v = phi_step(tc, d1, d2, Variant::complex_formula);
        const auto w = phi_step(tc, 16 * d1, 16 * d2, Variant::complex_formula);
        EXPECT_NEAR(w[0], 2 * v[0], 1e-13 * w[0]);
        EXPECT_NEAR(w[1], 2 * v[1], 1e-13 * w[1]);
    }
}

TEST(PhiStep, RejectsInvalidArguments) {
    const auto tc = torsion_constants(curve("[0,0,0,1,0]"), complex_place);
    EXPECT_THROW(phi_step(tc, 0.0, 0.0, Variant::complex_formula), std::invalid_argument);
    EXPECT_THROW(phi_step(tc, -1.0, 1.0, Variant::complex_formula), std::invalid_argument);
    EXPECT_THROW(PhiMap<double>(tc, Variant::automatic), ConfigError);
}

TEST(PsiLogStep, OriginMapsToLogPhi) {
    const auto tc = torsion_constants(curve("[0,0,0,1,0]"), complex_place);
    const auto a = psi_log_step(tc, {0.0, 0.0}, Variant::complex_formula);
    EXPECT_NEAR(a[0], 0.0941132032, 1e-9);
    EXPECT_NEAR(a[1], std::log(oracle::closed_form_phi_complex()), 1e-14);
}

TEST(PsiLogStep, QuarterContraction) {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = oracle::random_complex_curve(rng);
        const PhiMap<double> map(torsion_constants(c, complex_place), Variant::complex_formula);
        const std::array<double, 2> a{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        const std::array<double, 2> b{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        EXPECT_LE(sup_dist(map.log_step(a), map.log_step(b)), 0.25 * sup_dist(a, b) + 1e-12);
    }
}

TEST(PsiLogStep, AgreesWithValueDomain) {
    Rng rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = oracle::random_complex_curve(rng);
        const PhiMap<double> map(torsion_constants(c, complex_place), Variant::complex_formula);
        const double d1 = std::exp(rng.uniform(-5, 5)), d2 = std::exp(rng.uniform(-5, 5));
        const auto v = map.value(d1, d2);
        const auto a = map.log_step({std::log(d1), std::log(d2)});
        EXPECT_NEAR(std::exp(a[0]), v[0], 1e-12 * v[0]);
        EXPECT_NEAR(std::exp(a[1]), v[1], 1e-12 * v[1]);
    }
}

TEST(PsiLogStep, HugeArgumentsStayFinite) {
    const auto tc = torsion_constants(curve("[0,0,0,1,0]"), complex_place);
    const auto a = psi_log_step(tc, {4000.0, 3990.0}, Variant::complex_formula);
    EXPECT_TRUE(std::isfinite(a[0]));
    EXPECT_NEAR(a[0], 1000, 5);
}

TEST(SelectVariant, Examples) {
    EXPECT_EQ(select_variant(curve("[0,0,0,1,0]"), real_place), Variant::real_one_component);
    EXPECT_EQ(select_variant(curve("[0,0,0,-1,0]"), real_place), Variant::complex_formula);
    EXPECT_EQ(select_variant(curve("[0,0,0,1,0]"), complex_place), Variant::complex_formula);
    EXPECT_EQ(select_variant(curve("[0,0,0,-1,0]"), complex_place), Variant::complex_formula);
}

TEST(ResolveVariant, RejectsRealVariantAtComplexPlace) {
    const auto c = curve("[0,0,0,1,0]");
    EXPECT_THROW(resolve_variant(c, complex_place, Variant::real_one_component), ConfigError);
    EXPECT_EQ(resolve_variant(c, real_place, Variant::complex_formula), Variant::complex_formula);
    EXPECT_EQ(resolve_variant(c, real_place, Variant::automatic), Variant::real_one_component);
}

TEST(VariantNames, RoundTrip) {
    for (auto v : {Variant::automatic, Variant::complex_formula, Variant::real_one_component}) {
        EXPECT_EQ(variant_from_string(to_string(v)), v);
    }
    EXPECT_EQ(variant_from_string("real"), Variant::real_one_component);
    EXPECT_EQ(variant_from_string("complex"), Variant::complex_formula);
    EXPECT_FALSE(variant_from_string("bogus"));
}

TEST(BoundConfig, Validation) {
    BoundConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.rel_tol = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_iter = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.safety_slack = -1;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(GeometricFactor, Values) {
    EXPECT_DOUBLE_EQ(geometric_factor<double>(1), 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(geometric_factor<double>(2), 16.0 / 15.0);
    EXPECT_EQ(geometric_factor<double>(40), 1.0);
}

TEST(IterateBound, AffineCaseIsConstant) {
    const auto c = curve("[0,0,0,1,0]");
    const BoundConfig cfg;
    const auto rc = iterate_bound(torsion_constants(c, complex_place), cfg, Variant::complex_formula);
    const auto rr = iterate_bound(torsion_constants(c, real_place), cfg, Variant::real_one_component);
    for (double v : rc.c_seq) EXPECT_NEAR(v, rc.c_seq.front(), 1e-12);
    for (double v : rr.c_seq) EXPECT_NEAR(v, rr.c_seq.front(), 1e-12);
    EXPECT_NEAR(rc.bound, oracle::closed_form_bound_complex() + cfg.safety_slack, 1e-12);
    EXPECT_NEAR(rr.bound, oracle::closed_form_bound_real() + cfg.safety_slack, 1e-12);
    EXPECT_NEAR(rc.bound, 0.1254842710, 1e-5);
    EXPECT_NEAR(rr.bound, 0.0602614998, 1e-5);
    EXPECT_EQ(rc.variant_used, Variant::complex_formula);
}

TEST(IterateBound, FirstTermMatchesDirectEvaluation) {
    Rng rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        const auto tc = torsion_constants(oracle::random_complex_curve(rng), complex_place);
        const auto r = iterate_bound(tc, BoundConfig{}, Variant::complex_formula);
        const double direct = oracle::direct_first_bound(tc);
        EXPECT_NEAR(r.c_seq.front(), direct, 1e-12 * std::max(1.0, std::abs(direct)));
        EXPECT_NEAR(first_bound(tc, Variant::complex_formula), direct, 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST(IterateBound, ResultInvariants) {
    Rng rng(35);
    BoundConfig cfg;
    cfg.rel_tol = 1e-15;
    cfg.max_iter = 30;
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = oracle::random_complex_curve(rng);
        const auto r = compute_bound(c, complex_place, cfg);
        ASSERT_EQ(r.c_seq.size(), r.b_seq.size());
        EXPECT_EQ(static_cast<int>(r.c_seq.size()), r.iterations);
        for (std::size_t n = 0; n < r.c_seq.size(); ++n) {
            const double expected = geometric_factor<double>(static_cast<int>(n) + 1) * r.b_seq[n];
            EXPECT_NEAR(r.c_seq[n], expected, 1e-12 * std::max(1.0, std::abs(expected)));
            if (n > 0) EXPECT_LE(r.c_seq[n], r.c_seq[n - 1] + 1e-12);
        }
        EXPECT_GE(r.bound, r.c_seq.back());
    }
}

TEST(IterateBound, SequencesMeetInTheLimit) {
    Rng rng(36);
    BoundConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.max_iter = 60;
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = compute_bound(oracle::random_complex_curve(rng), complex_place, cfg);
        EXPECT_LE(std::abs(r.c_seq.back() - r.b_seq.back()), 1e-9);
    }
}

TEST(IterateBound, RealVariantDominates) {
    Rng rng(37);
    int checked = 0;
    while (checked < 100) {
        const auto c = oracle::random_real_curve(rng);
        if (*c.disc_sign() > 0) continue;
        ++checked;
        BoundConfig real_cfg, complex_cfg;
        real_cfg.variant = Variant::real_one_component;
        complex_cfg.variant = Variant::complex_formula;
        const auto r = compute_bound(c, real_place, real_cfg);
        const auto k = compute_bound(c, real_place, complex_cfg);
        EXPECT_LE(r.bound, k.bound + 1e-12);
    }
}

TEST(IterateBound, ContractionRate) {
    Rng rng(38);
    BoundConfig cfg;
    cfg.rel_tol = 1e-15;
    cfg.max_iter = 12;
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = compute_bound(oracle::random_complex_curve(rng), complex_place, cfg);
        const auto& it = r.iterates;
        for (std::size_t n = 2; n < it.size(); ++n) {
            const double prev = sup_dist(it[n - 1], it[n - 2]);
            const double step = sup_dist(it[n], it[n - 1]);
            if (prev < 1e-10) break;
            EXPECT_LE(step / prev, 0.25 + 1e-9);
        }
    }
}

TEST(IterateBound, StopsAtMaxIter) {
    BoundConfig cfg;
    cfg.max_iter = 1;
    const auto r = compute_bound(curve("[0,-1,1,-10,-20]"), real_place, cfg);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_EQ(r.c_seq.size(), 1u);
}

TEST(ComputeBound, ElkiesCurve) {
    const auto c = curve(oracle::kElkiesCurve);
    const auto r = compute_bound(c, real_place, BoundConfig{});
    EXPECT_EQ(r.variant_used, Variant::real_one_component);
    EXPECT_NEAR(r.c_seq.front(), oracle::kElkiesFirstBound, 1e-9 * oracle::kElkiesFirstBound);
    EXPECT_NEAR(r.bound, oracle::kElkiesRealLimit, 1e-6);
    const auto k = compute_bound(c, complex_place, BoundConfig{});
    EXPECT_NEAR(k.bound, oracle::kElkiesComplexLimit, 1e-6);
}

TEST(ComputeBound, Curve11a2) {
    const auto c = curve("[0,-1,1,-7820,-263580]");
    const auto r = compute_bound(c, real_place, BoundConfig{});
    EXPECT_NEAR(r.c_seq.front(), oracle::k11a2FirstBound, 1e-9 * oracle::k11a2FirstBound);
    EXPECT_NEAR(r.bound, oracle::k11a2Limit, 1e-6);
}

TEST(ComputeBound, LongDoubleMatchesDouble) {
    const auto a = parse_curve_list(oracle::kElkiesCurve);
    const auto ld = compute_bound(CurveModel<long double>::from_a_invariants(a), real_place, BoundConfig{});
    EXPECT_NEAR(static_cast<double>(ld.bound), oracle::kElkiesRealLimit, 1e-6);
}
