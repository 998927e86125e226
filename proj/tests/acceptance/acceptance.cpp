// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "archheight/archheight.hpp"
#include "oracles.hpp"

using namespace archheight;
using archheight::oracle::Cd;
using archheight::oracle::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome elkies_regression() {
    const auto t0 = Clock::now();
    const auto c = CurveModel<double>::from_a_invariants(parse_curve_list(oracle::kElkiesCurve));
    const auto r = compute_bound(c, real_place, BoundConfig{});
    const double dt = seconds_since(t0);
    const bool ok = std::abs(r.bound - 0.147) <= 0.01 && dt < 0.1;
    return {ok, fmt("bound=%.10f (target 0.147 +- 0.01) iterations=%d variant=%s time=%.4fs (limit 0.1s)",
                    r.bound, r.iterations, std::string(to_string(r.variant_used)).c_str(), dt)};
}

Outcome identity_suite() {
    const auto t0 = Clock::now();
    Rng rng(1001);
    double worst1 = 0, worst2 = 0;
    for (int curve = 0; curve < 100; ++curve) {
        const auto c = oracle::random_complex_curve(rng);
        const auto tc = torsion_constants(c, complex_place);
        for (int k = 0; k < 100; ++k) {
            const auto p = oracle::random_point(rng);
            const double n = p.sup_norm();
            std::array<Cd, 3> y;
            for (int j = 0; j < 3; ++j) y[j] = eigenform_y(c, tc.xt[j], p);
            const std::array<Cd, 2> xs{p.x1() * p.x1(), p.x2() * p.x2()};
            for (int i = 0; i < 2; ++i) {
                Cd sum = 0;
                for (int j = 0; j < 3; ++j) sum += tc.amat[i][j] * y[j];
                worst1 = std::max(worst1, std::abs(xs[i] - sum) / (n * n));
            }
            const auto [d1, d2] = detail::duplication_raw(c, p.x1(), p.x2());
            for (int j = 0; j < 3; ++j) {
                const Cd rhs = tc.bmat[j][0] * d1 + tc.bmat[j][1] * d2;
                worst2 = std::max(worst2, std::abs(y[j] * y[j] - rhs) / (n * n * n * n));
            }
        }
    }
    const double dt = seconds_since(t0);
    return {worst1 <= 1e-8 && worst2 <= 1e-8 && dt < 5,
            fmt("max rel err identity1=%.3e identity2=%.3e (limit 1e-8) time=%.3fs (limit 5s)", worst1,
                worst2, dt)};
}

Outcome monotonicity() {
    const auto t0 = Clock::now();
    Rng rng(1002);
    BoundConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.max_iter = 30;
    double worst_rise = -1e300, worst_gap = 0;
    int failures = 0;
    for (int curve = 0; curve < 200; ++curve) {
        try {
            const auto r = compute_bound(oracle::random_complex_curve(rng), complex_place, cfg);
            for (std::size_t n = 1; n < r.c_seq.size(); ++n)
                worst_rise = std::max(worst_rise, r.c_seq[n] - r.c_seq[n - 1]);
            worst_gap = std::max(worst_gap, std::abs(r.c_seq.back() - r.b_seq.back()));
        } catch (const Error&) {
            ++failures;
        }
    }
    const double dt = seconds_since(t0);
    return {failures == 0 && worst_rise <= 1e-12 && worst_gap <= 1e-9 && dt < 5,
            fmt("max c_{N+1}-c_N=%.3e (limit 1e-12) max |c_N-b_N|=%.3e (limit 1e-9) errors=%d "
                "time=%.3fs (limit 5s)",
                worst_rise, worst_gap, failures, dt)};
}

Outcome soundness() {
    const auto t0 = Clock::now();
    Rng rng(1003);
    double worst = -1e300;
    int violations = 0;
    for (PlaceSpec place : {real_place, complex_place}) {
        for (int curve = 0; curve < 50; ++curve) {
            const auto c = place.kind == PlaceKind::real ? oracle::random_real_curve(rng)
                                                         : oracle::random_complex_curve(rng);
            const double bound = compute_bound(c, place, BoundConfig{}).bound;
            PointSampler<double> sampler(c, place, rng.bits());
            const double range = log_phi_range(c);
            for (int k = 0; k < 1000; ++k) {
                const auto ev = psi_value(c, sampler.next(), 12, range);
                const double excess = ev.value - ev.tail_bound - bound;
                worst = std::max(worst, excess);
                if (excess > 1e-9) ++violations;
            }
        }
    }
    const double dt = seconds_since(t0);
    return {violations == 0 && dt < 60,
            fmt("max(value - tail - bound)=%.3e (limit 1e-9) violations=%d time=%.3fs (limit 60s)", worst,
                violations, dt)};
}

Outcome closed_form() {
    const auto c = CurveModel<double>::from_a_invariants(parse_curve_list("[0,0,0,1,0]"));
    BoundConfig cfg;
    const auto rc = compute_bound(c, complex_place, cfg);
    cfg.variant = Variant::real_one_component;
    const auto rr = compute_bound(c, real_place, cfg);
    const double expect_c = oracle::closed_form_bound_complex();
    const double expect_r = oracle::closed_form_bound_real();
    double spread = 0;
    for (const auto* r : {&rc, &rr})
        for (double v : r->c_seq) spread = std::max(spread, std::abs(v - r->c_seq.front()));
    const bool ok = std::abs(rc.bound - expect_c) <= 1e-5 && std::abs(rr.bound - expect_r) <= 1e-5 &&
                    spread <= 1e-12;
    return {ok, fmt("complex=%.10f (expect %.10f +- 1e-5) real=%.10f (expect %.10f +- 1e-5) "
                    "max |c_N - c_1|=%.3e (limit 1e-12)",
                    rc.bound, expect_c, rr.bound, expect_r, spread)};
}

Outcome matrix_suite() {
    Rng rng(1006);
    double worst_inv = 0, worst_anti = 0;
    for (int curve = 0; curve < 100; ++curve) {
        const auto c = oracle::random_complex_curve(rng);
        const auto xt = two_torsion_x(c, complex_place);
        double r = 0;
        for (const auto& x : xt) r = std::max(r, std::abs(x));
        for (int a = 0; a < 3; ++a) {
            const auto ta = translation_matrix(c, xt[a]);
            const double s = (1 + std::abs(xt[a])) * (1 + std::abs(xt[a]));
            worst_inv = std::max(worst_inv,
                                 (ta.m * ta.m + ta.det * Mat2<double>::identity()).max_abs() / s);
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;
                const auto mb = translation_matrix(c, xt[b]).m;
                worst_anti = std::max(worst_anti, (mb * ta.m + ta.m * mb).max_abs() / std::pow(1 + r, 4));
            }
        }
    }
    return {worst_inv <= 1e-10 && worst_anti <= 1e-8,
            fmt("max scaled |M^2 + det I|=%.3e (limit 1e-10) max scaled |M'M + MM'|=%.3e (limit 1e-8)",
                worst_inv, worst_anti)};
}

Outcome doubling_cross_check() {
    Rng rng(1007);
    double worst = 0;
    for (int curve = 0; curve < 20; ++curve) {
        const auto c = oracle::random_complex_curve(rng);
        for (int k = 0; k < 1000; ++k) {
            const auto p = lift_x(c, rng.disc(10), (k & 1) != 0);
            const auto q = double_point(c, p);
            worst = std::max(worst, q.kappa().projective_distance(duplication(c, p.kappa())));
        }
    }
    return {worst <= 1e-8, fmt("max cross product=%.3e (limit 1e-8)", worst)};
}

Outcome first_bound_cross_path() {
    Rng rng(1008);
    double worst = 0;
    for (int curve = 0; curve < 100; ++curve) {
        const auto tc = torsion_constants(oracle::random_complex_curve(rng), complex_place);
        const auto r = iterate_bound(tc, BoundConfig{}, Variant::complex_formula);
        const double direct = oracle::direct_first_bound(tc);
        worst = std::max(worst, std::abs(r.c_seq.front() - direct) / std::max(1.0, std::abs(direct)));
    }
    return {worst <= 1e-12, fmt("max rel diff c_1 vs direct=%.3e (limit 1e-12)", worst)};
}

Outcome speed_11a2() {
    const auto t0 = Clock::now();
    const auto c = CurveModel<double>::from_a_invariants(parse_curve_list("[0,-1,1,-7820,-263580]"));
    const auto r = compute_bound(c, real_place, BoundConfig{});
    const double dt = seconds_since(t0);
    const double emp = empirical_max_psi(c, real_place, 10000, 12, 11);
    return {dt < 0.01 && r.bound > emp,
            fmt("bound=%.9f empirical_max=%.9f time=%.5fs (limit 0.01s)", r.bound, emp, dt)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 elkies_regression", elkies_regression},
        {"2 identity_suite", identity_suite},
        {"3 monotonicity", monotonicity},
        {"4 soundness_sampling", soundness},
        {"5 closed_form_curve", closed_form},
        {"6 translation_matrix_suite", matrix_suite},
        {"7 doubling_cross_check", doubling_cross_check},
        {"8 first_bound_cross_path", first_bound_cross_path},
        {"9 speed_11a2", speed_11a2},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
