#pragma once

// Two-torsion x-coordinates and the constant matrices that express x_i^2
// through the eigenforms y_j and y_j^2 through delta_1, delta_2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "archheight/curve_model.hpp"
#include "archheight/errors.hpp"
#include "archheight/place.hpp"

namespace archheight {

template <class Real = double>
struct TorsionConstants {
    using Scalar = std::complex<Real>;

    /// x(T1), x(T2), x(T3) in the documented order.
    std::array<Scalar, 3> xt{};
    /// amat[i][j]: x_{i+1}^2 = sum_j amat[i][j] * y_j.
    std::array<std::array<Scalar, 3>, 2> amat{};
    /// bmat[j][k]: y_j^2 = bmat[j][0] * delta_1 + bmat[j][1] * delta_2.
    std::array<std::array<Scalar, 2>, 3> bmat{};
};

/// Plain 2x2 complex matrix.
template <class Real = double>
struct Mat2 {
    using Scalar = std::complex<Real>;
    std::array<std::array<Scalar, 2>, 2> e{};

    static Mat2 identity() { return {{{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}}}}; }

    Scalar det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = a.e[i][0] * b.e[0][j] + a.e[i][1] * b.e[1][j];
        return r;
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = a.e[i][j] + b.e[i][j];
        return r;
    }
    friend Mat2 operator*(const Scalar& s, const Mat2& a) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = s * a.e[i][j];
        return r;
    }

    Real max_abs() const {
        Real m = 0;
        for (const auto& row : e)
            for (const auto& v : row) m = std::max(m, std::abs(v));
        return m;
    }

    /// (x1, x2) -> M (x1, x2)^T.
    ProjectivePoint<Real> apply(const ProjectivePoint<Real>& p) const {
        return {e[0][0] * p.x1() + e[0][1] * p.x2(), e[1][0] * p.x1() + e[1][1] * p.x2()};
    }
};

/// Matrix of the action of translation by a 2-torsion point on P^1.
template <class Real = double>
struct TranslationMatrix {
    Mat2<Real> m;
    std::complex<Real> det;
    bool is_identity_class = false;

    static TranslationMatrix identity() { return {Mat2<Real>::identity(), {1, 0}, true}; }
};

namespace detail {

// Monic z^3 + c2 z^2 + c1 z + c0 in the scaled variable z = x / scale.
template <class C>
struct ScaledCubic {
    C c2, c1, c0;

    std::pair<C, C> eval(const C& z) const {
        const C f = ((z + c2) * z + c1) * z + c0;
        const C df = (C(3) * z + C(2) * c2) * z + c1;
        return {f, df};
    }
};

// A power of two near the Fujiwara root bound, so that the scaled roots are
// O(1) and the scaling itself is exact in binary floating point.
template <class Real>
Real root_scale(const CurveModel<Real>& c) {
    const Real bound = Real(2) * std::max({std::abs(c.b2()) / Real(4), std::sqrt(std::abs(c.b4()) / Real(2)),
                                           std::cbrt(std::abs(c.b6()) / Real(8))});
    int exponent = 0;
    if (bound > 0) std::frexp(bound, &exponent);
    return std::ldexp(Real(1), exponent);
}

template <class Real>
std::array<std::complex<Real>, 3> cardano_guess(const ScaledCubic<std::complex<Real>>& q) {
    using C = std::complex<Real>;
    const Real three(3);
    const C shift = q.c2 / three;
    const C p = q.c1 - q.c2 * q.c2 / three;
    const C r = Real(2) * q.c2 * q.c2 * q.c2 / Real(27) - q.c2 * q.c1 / three + q.c0;
    const C root = std::sqrt(r * r / Real(4) + p * p * p / Real(27));
    C u3 = -r / Real(2) + root;
    const C alt = -r / Real(2) - root;
    if (std::abs(alt) > std::abs(u3)) u3 = alt;
    const C u = u3 == C(0) ? C(0) : std::pow(u3, Real(1) / three);
    const C v = u == C(0) ? C(0) : -p / (three * u);
    const Real half_sqrt3 = std::sqrt(three) / Real(2);
    const C w(Real(-0.5), half_sqrt3);
    const C w2(Real(-0.5), -half_sqrt3);
    std::array<C, 3> z{u + v - shift, w * u + w2 * v - shift, w2 * u + w * v - shift};
    // Separate coincident guesses so that the simultaneous iteration can start.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(z[i] - z[j]) < Real(1e-3)) z[i] += C(Real(1e-3) * (i + 1), Real(1e-3) * i);
    return z;
}

// Aberth-Ehrlich refinement of all three roots at once; it cannot merge two
// approximations into one root.
template <class C, class R>
void aberth_refine(const ScaledCubic<C>& q, std::array<C, 3>& z) {
    using std::abs;
    using std::isfinite;
    const R tol = R(4) * std::numeric_limits<R>::epsilon();
    for (int iter = 0; iter < 100; ++iter) {
        bool done = true;
        for (int k = 0; k < 3; ++k) {
            const auto [f, df] = q.eval(z[k]);
            if (f == C(0)) continue;
            C repulsion(0);
            for (int j = 0; j < 3; ++j)
                if (j != k) repulsion += C(1) / (z[k] - z[j]);
            const C ratio = f / df;
            const C step = ratio / (C(1) - ratio * repulsion);
            const R size = abs(step);
            if (!isfinite(size)) continue;
            z[k] -= step;
            if (size > tol * std::max(R(abs(z[k])), R(1))) done = false;
        }
        if (done) break;
    }
}

// Plain Newton, stopping when the residual no longer decreases.
template <class C, class R>
C newton_polish(const ScaledCubic<C>& q, C z) {
    using std::abs;
    const R eps = std::numeric_limits<R>::epsilon();
    R last_residual = abs(q.eval(z).first);
    for (int iter = 0; iter < 100 && last_residual > 0; ++iter) {
        const auto [f, df] = q.eval(z);
        if (df == C(0)) break;
        const C candidate = z - f / df;
        const R residual = abs(q.eval(candidate).first);
        if (!(residual < last_residual)) break;
        const R step = abs(candidate - z);
        z = candidate;
        last_residual = residual;
        if (step <= eps * abs(z)) break;
    }
    return z;
}

// Refines Aberth output and imposes the symmetry of real models: an exactly
// real root first and an exact conjugate pair (Im > 0 first) when disc < 0,
// three exactly real roots when disc > 0.
template <class C, class R>
std::array<C, 3> polish_roots(const ScaledCubic<C>& q, std::array<C, 3> z, std::optional<int> disc_sign) {
    using std::abs;
    aberth_refine<C, R>(q, z);
    if (!disc_sign) {
        for (auto& r : z) r = newton_polish<C, R>(q, r);
        return z;
    }
    if (*disc_sign > 0) {
        for (auto& r : z) r = newton_polish<C, R>(q, C(R(r.real()), R(0)));
        return z;
    }
    std::sort(z.begin(), z.end(), [](const C& a, const C& b) { return abs(a.imag()) < abs(b.imag()); });
    C upper = z[1].imag() >= 0 ? z[1] : z[2];
    const C lower = z[1].imag() >= 0 ? z[2] : z[1];
    upper = (upper + C(R(lower.real()), R(-lower.imag()))) / C(2);
    if (upper.imag() < 0) upper = C(R(upper.real()), R(-upper.imag()));
    upper = newton_polish<C, R>(q, upper);
    if (upper.imag() < 0) upper = C(R(upper.real()), R(-upper.imag()));
    return {newton_polish<C, R>(q, C(R(z[0].real()), R(0))), upper,
            C(R(upper.real()), R(-upper.imag()))};
}

using WideReal = boost::multiprecision::cpp_bin_float_50;
using WideComplex = boost::multiprecision::cpp_complex_50;

inline WideComplex widen(const ExactComplex& v) {
    return WideComplex(WideReal(v.re), WideReal(v.im));
}

template <class Real>
bool lex_less(const std::complex<Real>& a, const std::complex<Real>& b, Real tol) {
    if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace detail

/// Roots of f (the x-coordinates of the nontrivial 2-torsion points).
///
/// Ordering: at a real place with disc < 0 the real root comes first and
/// x(T3) = conj(x(T2)) with Im x(T2) > 0. Otherwise the roots are sorted by
/// (real part, imaginary part). Real models get exactly real or exactly
/// conjugate roots. Models built from exact coefficients are refined in
/// 50-digit arithmetic, which matters for nearly repeated roots.
template <class Real>
std::array<std::complex<Real>, 3> two_torsion_x(const CurveModel<Real>& c, PlaceSpec place) {
    using C = std::complex<Real>;
    if (place.kind == PlaceKind::real && !c.is_real()) {
        throw ConfigError("a real place requires real Weierstrass coefficients");
    }
    const Real s = detail::root_scale(c);
    const detail::ScaledCubic<C> q{c.b2() / Real(4) / s, c.b4() / Real(2) / (s * s),
                                   c.b6() / Real(4) / (s * s * s)};
    const auto guess = detail::cardano_guess(q);

    std::array<C, 3> roots{};
    if (const auto& ex = c.exact()) {
        using W = detail::WideComplex;
        using WR = detail::WideReal;
        const WR ws(s);
        const detail::ScaledCubic<W> wq{detail::widen(ex->b2) / W(4) / ws,
                                        detail::widen(ex->b4) / W(2) / (ws * ws),
                                        detail::widen(ex->b6) / W(4) / (ws * ws * ws)};
        auto z = detail::polish_roots<C, Real>(q, guess, c.disc_sign());
        std::array<W, 3> wz;
        for (int k = 0; k < 3; ++k) wz[k] = W(WR(z[k].real()), WR(z[k].imag()));
        wz = detail::polish_roots<W, WR>(wq, wz, c.disc_sign());
        for (int k = 0; k < 3; ++k) {
            roots[k] = C(static_cast<Real>(wz[k].real() * ws), static_cast<Real>(wz[k].imag() * ws));
        }
    } else {
        const auto z = detail::polish_roots<C, Real>(q, guess, c.disc_sign());
        for (int k = 0; k < 3; ++k) roots[k] = z[k] * s;
    }

    const Real scale = std::max({Real(1), std::abs(c.b2()) / Real(4), std::abs(c.b4()) / Real(2),
                                 std::abs(c.b6()) / Real(4)});
    for (const auto& r : roots) {
        const Real residual = std::abs(kernel_poly(c, r).first);
        const Real growth = (Real(1) + std::abs(r));
        if (!(residual <= Real(1e-13) * growth * growth * growth * scale)) {
            throw RootFindingFailure("Newton polishing did not reach the residual bound");
        }
    }

    const bool one_real_root = c.is_real() && *c.disc_sign() < 0;
    if (place.kind == PlaceKind::real && one_real_root) return roots;

    Real magnitude = 0;
    for (const auto& r : roots) magnitude = std::max(magnitude, std::abs(r));
    const Real tol = Real(64) * std::numeric_limits<Real>::epsilon() * (Real(1) + magnitude);
    for (int i = 1; i < 3; ++i)
        for (int j = i; j > 0 && detail::lex_less(roots[j], roots[j - 1], tol); --j)
            std::swap(roots[j], roots[j - 1]);
    return roots;
}

/// Fills the constant matrices from distinct torsion x-coordinates.
template <class Real>
TorsionConstants<Real> bound_constants(const CurveModel<Real>& c,
                                       const std::array<std::complex<Real>, 3>& xt) {
    using C = std::complex<Real>;
    TorsionConstants<Real> tc;
    tc.xt = xt;
    const C half_b4 = c.b4() / Real(2);
    for (int j = 0; j < 3; ++j) {
        const int k = (j + 1) % 3;
        const int l = (j + 2) % 3;
        const C den = Real(2) * (xt[j] - xt[k]) * (xt[j] - xt[l]);
        if (!(std::abs(den) >= Real(1e-300))) {
            throw NumericBreakdown("two-torsion x-coordinates are numerically coincident");
        }
        tc.amat[0][j] = (Real(2) * xt[k] * xt[l] - half_b4) / den;
        tc.amat[1][j] = C(-1) / den;
        tc.bmat[j] = {C(1), -xt[j]};
    }
    return tc;
}

/// Convenience: roots and constants in one call.
template <class Real>
TorsionConstants<Real> torsion_constants(const CurveModel<Real>& c, PlaceSpec place) {
    return bound_constants(c, two_torsion_x(c, place));
}

/// y_T(x1, x2) = x1^2 - 2 x(T) x1 x2 - (f'(x(T)) - x(T)^2) x2^2.
template <class Real>
std::complex<Real> eigenform_y(const CurveModel<Real>& c, const std::complex<Real>& xT,
                               const ProjectivePoint<Real>& p) {
    const auto df = kernel_poly(c, xT).second;
    const auto& x1 = p.x1();
    const auto& x2 = p.x2();
    return x1 * x1 - Real(2) * xT * x1 * x2 - (df - xT * xT) * x2 * x2;
}

/// [[x(T), f'(x(T)) - x(T)^2], [1, -x(T)]] for a nontrivial T.
template <class Real>
TranslationMatrix<Real> translation_matrix(const CurveModel<Real>& c, const std::complex<Real>& xT) {
    using C = std::complex<Real>;
    const auto df = kernel_poly(c, xT).second;
    TranslationMatrix<Real> t;
    t.m.e = {{{xT, df - xT * xT}, {C(1), -xT}}};
    t.det = t.m.det();
    t.is_identity_class = false;
    return t;
}

}  // namespace archheight
