#pragma once

// Direct evaluation of Phi and the truncated Psi series, point sampling at
// a place, and an affine chord-tangent oracle. This is the validation side:
// it never uses the iteration of bound_engine beyond |phi(1, 1)|.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "archheight/bound_engine.hpp"
#include "archheight/curve_model.hpp"
#include "archheight/errors.hpp"
#include "archheight/place.hpp"
#include "archheight/torsion_constants.hpp"

namespace archheight {

template <class Real = double>
struct PsiEvaluation {
    Real value = 0;       ///< partial sum over n < terms_used
    Real tail_bound = 0;  ///< |Psi - value| <= tail_bound
    int terms_used = 0;
};

template <class Real = double>
struct AffinePoint {
    std::complex<Real> x{};
    std::complex<Real> y{};
    bool at_infinity = false;

    static AffinePoint infinity() { return {{}, {}, true}; }

    ProjectivePoint<Real> kappa() const {
        if (at_infinity) return ProjectivePoint<Real>::infinity();
        return {x, std::complex<Real>(1)};
    }
};

/// Phi(P) = max(|delta_1|, |delta_2|) / max(|x1|, |x2|)^4.
template <class Real>
Real phi_value(const CurveModel<Real>& c, const ProjectivePoint<Real>& p) {
    const auto q = p.normalized();
    const auto [d1, d2] = detail::duplication_raw(c, q.x1(), q.x2());
    const Real n = q.sup_norm();
    return std::max(std::abs(d1), std::abs(d2)) / (n * n * n * n);
}

/// L with |log Phi| <= L everywhere: coefficient sums bound Phi above and
/// |x_i| <= Phi^{1/4} |phi(1, 1)| bounds it below.
template <class Real>
Real log_phi_range(const CurveModel<Real>& c) {
    const Real upper = std::log(Real(1) + std::abs(c.b4()) + Real(2) * std::abs(c.b6()) +
                                std::abs(c.b8())) +
                       std::log(Real(4) + std::abs(c.b2()) + Real(2) * std::abs(c.b4()) +
                                std::abs(c.b6()));
    const auto tc = torsion_constants(c, complex_place);
    const auto v = PhiMap<Real>(tc, Variant::complex_formula).value(1, 1);
    const Real lower = Real(4) * std::log(std::max(v[0], v[1]));
    return std::max(upper, lower);
}

/// Psi(P) = -sum_{n >= 0} 4^{-n-1} log Phi(2^n P), truncated after `terms`
/// summands; `range` is log_phi_range(c).
template <class Real>
PsiEvaluation<Real> psi_value(const CurveModel<Real>& c, const ProjectivePoint<Real>& p, int terms,
                              Real range) {
    if (terms < 1) throw ConfigError("psi_value needs at least one term");
    auto x1 = p.x1();
    auto x2 = p.x2();
    PsiEvaluation<Real> out;
    Real weight = Real(0.25);
    for (int n = 0; n < terms; ++n) {
        const Real norm = std::max(std::abs(x1), std::abs(x2));
        x1 /= norm;
        x2 /= norm;
        const auto [d1, d2] = detail::duplication_raw(c, x1, x2);
        const Real dn = std::max(std::abs(d1), std::abs(d2));
        if (!(dn > 0)) throw DegeneratePoint("duplication returned (0, 0)");
        // x is sup-normalized, so Phi is max |delta| up to rounding of the norm.
        const Real xn = std::max(std::abs(x1), std::abs(x2));
        out.value -= weight * (std::log(dn) - Real(4) * std::log(xn));
        weight /= 4;
        x1 = d1;
        x2 = d2;
    }
    out.terms_used = terms;
    out.tail_bound = std::ldexp(range, -2 * terms) / Real(3);
    return out;
}

template <class Real>
PsiEvaluation<Real> psi_value(const CurveModel<Real>& c, const ProjectivePoint<Real>& p, int terms) {
    return psi_value(c, p, terms, log_phi_range(c));
}

/// Deterministic sampler of points kappa(P), P in E(K_v).
///
/// Pairs are drawn uniformly on the sup-norm unit sphere, x1 is stretched
/// by a log-uniform factor in [1, R] (R bounds the roots of f) so that
/// curves with huge coefficients are sampled near their 2-torsion, and the
/// pair is renormalized. At a real place only pairs with
/// delta_2(x1, x2) >= 0 are kept, which is the condition for a real y.
template <class Real = double>
class PointSampler {
public:
    static constexpr int kMaxRejections = 100000;

    PointSampler(const CurveModel<Real>& c, PlaceSpec place, std::uint64_t seed)
        : curve_(&c), place_(place), rng_(seed) {
        if (place.kind == PlaceKind::real && !c.is_real()) {
            throw ConfigError("a real place requires real Weierstrass coefficients");
        }
        const Real fujiwara =
            Real(2) * std::max({std::abs(c.b2()) / Real(4), std::sqrt(std::abs(c.b4()) / Real(2)),
                                std::cbrt(std::abs(c.b6()) / Real(8))});
        log_stretch_ = std::log(std::max(Real(1), fujiwara));
    }

    ProjectivePoint<Real> next() {
        return place_.kind == PlaceKind::complex ? next_complex() : next_real();
    }

private:
    using C = std::complex<Real>;

    Real uniform01() { return static_cast<Real>(rng_() >> 11) * Real(0x1p-53); }
    Real stretch() { return std::exp(uniform01() * log_stretch_); }

    ProjectivePoint<Real> next_complex() {
        const Real two_pi = 2 * std::numbers::pi_v<Real>;
        const bool first_on_circle = (rng_() >> 63) != 0;
        const C on_circle = std::polar(Real(1), two_pi * uniform01());
        const C in_disc = std::polar(std::sqrt(uniform01()), two_pi * uniform01());
        C x1 = first_on_circle ? on_circle : in_disc;
        C x2 = first_on_circle ? in_disc : on_circle;
        x1 *= stretch();
        return ProjectivePoint<Real>(x1, x2).normalized();
    }

    ProjectivePoint<Real> next_real() {
        const auto& c = *curve_;
        const Real b2 = c.b2().real(), b4 = c.b4().real(), b6 = c.b6().real();
        for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
            const bool first_on_edge = (rng_() >> 63) != 0;
            const Real edge = (rng_() >> 63) != 0 ? Real(1) : Real(-1);
            const Real inner = Real(2) * uniform01() - Real(1);
            Real x1 = first_on_edge ? edge : inner;
            Real x2 = first_on_edge ? inner : edge;
            x1 *= stretch();
            const Real n = std::max(std::abs(x1), std::abs(x2));
            x1 /= n;
            x2 /= n;
            if (x2 == 0) return {C(x1), C(0)};
            const Real x1s = x1 * x1, x2s = x2 * x2;
            const Real d2 = Real(4) * x1s * x1 * x2 + b2 * x1s * x2s + Real(2) * b4 * x1 * x2s * x2 +
                            b6 * x2s * x2s;
            if (d2 >= 0) return {C(x1), C(x2)};
        }
        throw SamplingExhausted("no real point found after 1e5 rejections");
    }

    const CurveModel<Real>* curve_;
    PlaceSpec place_;
    std::mt19937_64 rng_;
    Real log_stretch_ = 0;
};

template <class Real>
ProjectivePoint<Real> sample_point(const CurveModel<Real>& c, PlaceSpec place, std::uint64_t seed) {
    return PointSampler<Real>(c, place, seed).next();
}

/// Largest value + tail_bound of the truncated Psi over n_samples samples.
template <class Real>
Real empirical_max_psi(const CurveModel<Real>& c, PlaceSpec place, int n_samples, int terms,
                       std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
    PointSampler<Real> sampler(c, place, seed);
    const Real range = log_phi_range(c);
    Real best = -std::numeric_limits<Real>::infinity();
    for (int s = 0; s < n_samples; ++s) {
        const auto ev = psi_value(c, sampler.next(), terms, range);
        best = std::max(best, ev.value + ev.tail_bound);
    }
    return best;
}

/// |lhs - rhs| of the Weierstrass equation relative to the size of its terms.
template <class Real>
Real weierstrass_residual(const CurveModel<Real>& c, const AffinePoint<Real>& p) {
    if (p.at_infinity) return 0;
    const auto& x = p.x;
    const auto& y = p.y;
    const std::array<std::complex<Real>, 8> lhs_rhs{
        y * y, c.a1() * x * y, c.a3() * y, -x * x * x, -c.a2() * x * x, -c.a4() * x, -c.a6(), {}};
    std::complex<Real> sum(0);
    Real size = 0;
    for (const auto& t : lhs_rhs) {
        sum += t;
        size += std::abs(t);
    }
    return size > 0 ? std::abs(sum) / size : 0;
}

/// A point with the given x-coordinate; `branch` selects the sign of the
/// square root.
template <class Real>
AffinePoint<Real> lift_x(const CurveModel<Real>& c, const std::complex<Real>& x, bool branch = true) {
    const auto disc = ((Real(4) * x + c.b2()) * x + Real(2) * c.b4()) * x + c.b6();
    auto root = std::sqrt(disc);
    if (!branch) root = -root;
    return {x, (root - c.a1() * x - c.a3()) / Real(2), false};
}

namespace detail {

template <class Real>
void require_on_curve(const CurveModel<Real>& c, const AffinePoint<Real>& p) {
    if (weierstrass_residual(c, p) > Real(1e-6)) {
        throw NotOnCurve("point does not satisfy the Weierstrass equation");
    }
}

template <class Real>
AffinePoint<Real> chord_tangent(const CurveModel<Real>& c, const AffinePoint<Real>& p,
                                const std::complex<Real>& slope, const std::complex<Real>& other_x) {
    const auto x3 = slope * slope + c.a1() * slope - c.a2() - p.x - other_x;
    const auto nu = p.y - slope * p.x;
    const auto y3 = -(slope + c.a1()) * x3 - nu - c.a3();
    return {x3, y3, false};
}

}  // namespace detail

/// 2P by the tangent-line formulas for a general Weierstrass equation.
template <class Real>
AffinePoint<Real> double_point(const CurveModel<Real>& c, const AffinePoint<Real>& p) {
    if (p.at_infinity) return p;
    detail::require_on_curve(c, p);
    const auto& x = p.x;
    const auto& y = p.y;
    const auto den = Real(2) * y + c.a1() * x + c.a3();
    const Real den_scale = Real(2) * std::abs(y) + std::abs(c.a1() * x) + std::abs(c.a3());
    if (std::abs(den) <= Real(64) * std::numeric_limits<Real>::epsilon() * den_scale) {
        return AffinePoint<Real>::infinity();
    }
    const auto num = Real(3) * x * x + Real(2) * c.a2() * x + c.a4() - c.a1() * y;
    return detail::chord_tangent(c, p, num / den, x);
}

/// P + Q by the chord-tangent law.
template <class Real>
AffinePoint<Real> add_points(const CurveModel<Real>& c, const AffinePoint<Real>& p,
                             const AffinePoint<Real>& q) {
    if (p.at_infinity) return q;
    if (q.at_infinity) return p;
    detail::require_on_curve(c, p);
    detail::require_on_curve(c, q);
    const Real scale = std::max({std::abs(p.x), std::abs(q.x), Real(1)});
    if (std::abs(p.x - q.x) <= Real(64) * std::numeric_limits<Real>::epsilon() * scale) {
        const auto neg_sum = p.y + q.y + c.a1() * q.x + c.a3();
        const Real y_scale = std::abs(p.y) + std::abs(q.y) + std::abs(c.a1() * q.x) + std::abs(c.a3());
        if (std::abs(neg_sum) <= Real(1e-9) * std::max(y_scale, Real(1))) {
            return AffinePoint<Real>::infinity();
        }
        return double_point(c, p);
    }
    return detail::chord_tangent(c, p, (q.y - p.y) / (q.x - p.x), q.x);
}

/// The 2-torsion point with the given x-coordinate.
template <class Real>
AffinePoint<Real> torsion_point(const CurveModel<Real>& c, const std::complex<Real>& xT) {
    return {xT, -(c.a1() * xT + c.a3()) / Real(2), false};
}

}  // namespace archheight
