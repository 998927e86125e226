#pragma once

// Weierstrass models, b-invariants, the duplication map on x-coordinates
// and the 2-division cubic f.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>

#include "archheight/errors.hpp"
#include "archheight/exact.hpp"

namespace archheight {

/// Exact b-invariants and discriminant, kept when the model was built from
/// rational (or Gaussian-rational) coefficients.
struct ExactInvariants {
    std::array<ExactComplex, 5> a;
    ExactComplex b2, b4, b6, b8, disc;
};

namespace detail {

template <class T>
struct BInvariants {
    T b2, b4, b6, b8, disc;
};

// Generic over the scalar ring so the exact and floating routes share one
// transcription of the formulas.
template <class T>
BInvariants<T> b_invariants(const T& a1, const T& a2, const T& a3, const T& a4, const T& a6) {
    BInvariants<T> r;
    r.b2 = a1 * a1 + T(4) * a2;
    r.b4 = T(2) * a4 + a1 * a3;
    r.b6 = a3 * a3 + T(4) * a6;
    r.b8 = a1 * a1 * a6 + T(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    r.disc = -(r.b2 * r.b2 * r.b8) - T(8) * r.b4 * r.b4 * r.b4 - T(27) * r.b6 * r.b6 +
             T(9) * r.b2 * r.b4 * r.b6;
    return r;
}

}  // namespace detail

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over C, with derived
/// invariants. Immutable after construction; the discriminant is nonzero.
template <class Real = double>
class CurveModel {
public:
    using real_type = Real;
    using Scalar = std::complex<Real>;

    /// Floating route. Throws SingularCurve when |disc| underflows.
    static CurveModel from_a_invariants(const std::array<Scalar, 5>& a) {
        for (const auto& v : a) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw SingularCurve("non-finite Weierstrass coefficient");
            }
        }
        CurveModel c;
        c.a_ = a;
        const auto inv = detail::b_invariants<Scalar>(a[0], a[1], a[2], a[3], a[4]);
        c.b2_ = inv.b2;
        c.b4_ = inv.b4;
        c.b6_ = inv.b6;
        c.b8_ = inv.b8;
        c.disc_ = inv.disc;
        c.is_real_ = std::all_of(a.begin(), a.end(), [](const Scalar& v) { return v.imag() == 0; });
        const Real mag = std::abs(c.disc_);
        if (!(mag >= std::numeric_limits<Real>::min()) || !std::isfinite(mag)) {
            throw SingularCurve("discriminant vanishes at working precision");
        }
        return c;
    }

    /// Exact route: invariants are computed in Q(i) and rounded once.
    static CurveModel from_a_invariants(const std::array<ExactComplex, 5>& a) {
        const auto inv = detail::b_invariants<ExactComplex>(a[0], a[1], a[2], a[3], a[4]);
        if (inv.disc.is_zero()) throw SingularCurve("discriminant is zero");
        CurveModel c;
        for (std::size_t i = 0; i < 5; ++i) c.a_[i] = a[i].template to_complex<Real>();
        c.b2_ = inv.b2.template to_complex<Real>();
        c.b4_ = inv.b4.template to_complex<Real>();
        c.b6_ = inv.b6.template to_complex<Real>();
        c.b8_ = inv.b8.template to_complex<Real>();
        c.disc_ = inv.disc.template to_complex<Real>();
        c.is_real_ = std::all_of(a.begin(), a.end(), [](const ExactComplex& v) { return v.is_real(); });
        for (const Scalar* v : {&c.b2_, &c.b4_, &c.b6_, &c.b8_, &c.disc_}) {
            if (!std::isfinite(std::abs(*v))) {
                throw NumericBreakdown("invariant exceeds the floating range");
            }
        }
        if (!(std::abs(c.disc_) >= std::numeric_limits<Real>::min())) {
            throw SingularCurve("discriminant underflows at working precision");
        }
        c.exact_ = ExactInvariants{a, inv.b2, inv.b4, inv.b6, inv.b8, inv.disc};
        return c;
    }

    const std::array<Scalar, 5>& a_invariants() const { return a_; }
    const Scalar& a1() const { return a_[0]; }
    const Scalar& a2() const { return a_[1]; }
    const Scalar& a3() const { return a_[2]; }
    const Scalar& a4() const { return a_[3]; }
    const Scalar& a6() const { return a_[4]; }
    const Scalar& b2() const { return b2_; }
    const Scalar& b4() const { return b4_; }
    const Scalar& b6() const { return b6_; }
    const Scalar& b8() const { return b8_; }
    const Scalar& disc() const { return disc_; }

    bool is_real() const { return is_real_; }
    const std::optional<ExactInvariants>& exact() const { return exact_; }

    /// Sign of the discriminant for real models (exact when available).
    std::optional<int> disc_sign() const {
        if (!is_real_) return std::nullopt;
        if (exact_) return exact_->disc.re < 0 ? -1 : 1;
        return disc_.real() < 0 ? -1 : 1;
    }

    /// log|disc|, computed from exact data when present.
    Real log_abs_disc() const {
        if (exact_) return static_cast<Real>(log_abs(exact_->disc));
        return std::log(std::abs(disc_));
    }

private:
    CurveModel() = default;

    std::array<Scalar, 5> a_{};
    Scalar b2_{}, b4_{}, b6_{}, b8_{}, disc_{};
    bool is_real_ = true;
    std::optional<ExactInvariants> exact_;
};

/// A representative (x1, x2) != (0, 0) of a point of P^1.
template <class Real = double>
class ProjectivePoint {
public:
    using Scalar = std::complex<Real>;

    ProjectivePoint(Scalar x1, Scalar x2) : x1_(x1), x2_(x2) {
        if (x1_ == Scalar(0) && x2_ == Scalar(0)) {
            throw DegeneratePoint("(0, 0) does not represent a point of P^1");
        }
    }

    static ProjectivePoint infinity() { return {Scalar(1), Scalar(0)}; }

    const Scalar& x1() const { return x1_; }
    const Scalar& x2() const { return x2_; }

    Real sup_norm() const { return std::max(std::abs(x1_), std::abs(x2_)); }

    /// Representative rescaled to sup norm 1.
    ProjectivePoint normalized() const {
        const Real n = sup_norm();
        return {x1_ / n, x2_ / n};
    }

    /// |x1 y2 - x2 y1| between sup-normalized representatives; zero iff the
    /// two represent the same point.
    Real projective_distance(const ProjectivePoint& other) const {
        const auto p = normalized();
        const auto q = other.normalized();
        return std::abs(p.x1_ * q.x2_ - p.x2_ * q.x1_);
    }

private:
    Scalar x1_;
    Scalar x2_;
};

namespace detail {

// delta_1, delta_2 at a representative, without the degeneracy check.
template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> duplication_raw(const CurveModel<Real>& c,
                                                                 const std::complex<Real>& x1,
                                                                 const std::complex<Real>& x2) {
    const auto x1s = x1 * x1;
    const auto x2s = x2 * x2;
    const auto x12 = x1 * x2;
    const Real two(2), four(4);
    const auto d1 = x1s * x1s - c.b4() * x1s * x2s - two * c.b6() * x12 * x2s - c.b8() * x2s * x2s;
    const auto d2 =
        four * x1s * x12 + c.b2() * x1s * x2s + two * c.b4() * x12 * x2s + c.b6() * x2s * x2s;
    return {d1, d2};
}

}  // namespace detail

/// kappa(2P) from a representative of kappa(P); homogeneous of degree 4.
template <class Real>
ProjectivePoint<Real> duplication(const CurveModel<Real>& c, const ProjectivePoint<Real>& p) {
    const auto [d1, d2] = detail::duplication_raw(c, p.x1(), p.x2());
    if (d1 == std::complex<Real>(0) && d2 == std::complex<Real>(0)) {
        throw DegeneratePoint("duplication returned (0, 0)");
    }
    return {d1, d2};
}

/// f(x) = x^3 + b2/4 x^2 + b4/2 x + b6/4 and f'(x), by Horner's scheme.
template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> kernel_poly(const CurveModel<Real>& c,
                                                              const std::complex<Real>& x) {
    const Real two(2), three(3), four(4);
    const auto c2 = c.b2() / four;
    const auto c1 = c.b4() / two;
    const auto c0 = c.b6() / four;
    const auto f = ((x + c2) * x + c1) * x + c0;
    const auto df = (three * x + two * c2) * x + c1;
    return {f, df};
}

}  // namespace archheight
