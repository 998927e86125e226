#pragma once

// The contraction iteration bounding the archimedean local height
// difference Psi from above.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "archheight/curve_model.hpp"
#include "archheight/errors.hpp"
#include "archheight/place.hpp"
#include "archheight/torsion_constants.hpp"

namespace archheight {

/// Which majorant of |y_j|^2 feeds the iteration map.
enum class Variant {
    automatic,           ///< resolved per curve and place by select_variant
    complex_formula,     ///< |b_j1| d1 + |b_j2| d2 for every j
    real_one_component,  ///< supremum over real delta for j = 2, 3
};

inline constexpr std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::automatic: return "auto";
        case Variant::complex_formula: return "complex_formula";
        case Variant::real_one_component: return "real_one_component";
    }
    return "?";
}

inline std::optional<Variant> variant_from_string(std::string_view s) {
    if (s == "auto" || s == "automatic") return Variant::automatic;
    if (s == "complex" || s == "complex_formula") return Variant::complex_formula;
    if (s == "real" || s == "real_one_component") return Variant::real_one_component;
    return std::nullopt;
}

struct BoundConfig {
    double rel_tol = 1e-9;
    int max_iter = 60;
    Variant variant = Variant::automatic;
    double safety_slack = 1e-8;

    void validate() const {
        if (!(rel_tol > 0)) throw ConfigError("rel_tol must be positive");
        if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
        if (!(safety_slack >= 0)) throw ConfigError("safety_slack must be nonnegative");
    }
};

template <class Real = double>
struct BoundResult {
    std::vector<Real> c_seq;  ///< c_1, ..., c_N
    std::vector<Real> b_seq;  ///< b_N = max_i psi^N(0, 0)_i = log |phi^N(1, 1)|
    std::vector<std::array<Real, 2>> iterates;  ///< psi^N(0, 0)
    Real bound = 0;           ///< c_N + safety_slack
    int iterations = 0;
    Variant variant_used = Variant::complex_formula;
};

/// The map phi and its log-domain conjugate psi for fixed constants.
template <class Real = double>
class PhiMap {
public:
    PhiMap(const TorsionConstants<Real>& tc, Variant variant) {
        if (variant == Variant::automatic) {
            throw ConfigError("PhiMap needs a resolved variant");
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) a_abs_[i][j] = std::abs(tc.amat[i][j]);
        for (int j = 0; j < 3; ++j) {
            b1_abs_[j] = std::abs(tc.bmat[j][0]);
            b2_abs_[j] = std::abs(tc.bmat[j][1]);
            b2_re_abs_[j] = std::abs(tc.bmat[j][1].real());
            b2_im_abs_[j] = std::abs(tc.bmat[j][1].imag());
            real_form_[j] = variant == Variant::real_one_component && j > 0;
        }
    }

    /// phi(d1, d2); homogeneous of degree 1/4.
    std::array<Real, 2> value(Real d1, Real d2) const {
        if (!(d1 >= 0) || !(d2 >= 0) || (d1 == 0 && d2 == 0)) {
            throw std::invalid_argument("phi is defined on nonnegative pairs other than (0, 0)");
        }
        const auto s = weighted_sums(d1, d2);
        return {std::sqrt(s[0]), std::sqrt(s[1])};
    }

    /// psi(alpha) = log phi(exp(alpha_1), exp(alpha_2)), with max(alpha)/4
    /// factored out before exponentiating.
    std::array<Real, 2> log_step(const std::array<Real, 2>& alpha) const {
        const Real m = std::max(alpha[0], alpha[1]);
        const auto s = weighted_sums(std::exp(alpha[0] - m), std::exp(alpha[1] - m));
        return {m / 4 + std::log(s[0]) / 2, m / 4 + std::log(s[1]) / 2};
    }

private:
    Real inner(int j, Real d1, Real d2) const {
        if (real_form_[j]) return std::hypot(b1_abs_[j] * d1 + b2_re_abs_[j] * d2, b2_im_abs_[j] * d2);
        return b1_abs_[j] * d1 + b2_abs_[j] * d2;
    }

    std::array<Real, 2> weighted_sums(Real d1, Real d2) const {
        std::array<Real, 3> roots{};
        for (int j = 0; j < 3; ++j) roots[j] = std::sqrt(inner(j, d1, d2));
        std::array<Real, 2> s{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) s[i] += a_abs_[i][j] * roots[j];
        return s;
    }

    std::array<std::array<Real, 3>, 2> a_abs_{};
    std::array<Real, 3> b1_abs_{}, b2_abs_{}, b2_re_abs_{}, b2_im_abs_{};
    std::array<bool, 3> real_form_{};
};

template <class Real>
std::array<Real, 2> phi_step(const TorsionConstants<Real>& tc, Real d1, Real d2, Variant variant) {
    return PhiMap<Real>(tc, variant).value(d1, d2);
}

template <class Real>
std::array<Real, 2> psi_log_step(const TorsionConstants<Real>& tc, const std::array<Real, 2>& alpha,
                                 Variant variant) {
    return PhiMap<Real>(tc, variant).log_step(alpha);
}

/// The sharper real-place variant applies exactly when E(R) is connected.
template <class Real>
Variant select_variant(const CurveModel<Real>& c, PlaceSpec place) {
    if (place.kind == PlaceKind::real && c.is_real() && *c.disc_sign() < 0) {
        return Variant::real_one_component;
    }
    return Variant::complex_formula;
}

/// Resolves `requested` for a curve and place, rejecting combinations for
/// which the variant is not a valid majorant.
template <class Real>
Variant resolve_variant(const CurveModel<Real>& c, PlaceSpec place, Variant requested) {
    if (requested == Variant::automatic) return select_variant(c, place);
    if (requested == Variant::real_one_component &&
        (place.kind != PlaceKind::real || !c.is_real())) {
        throw ConfigError("the real variant needs a real curve at a real place");
    }
    return requested;
}

/// 4^N / (4^N - 1) without forming 4^N.
template <class Real>
Real geometric_factor(int n) {
    return Real(1) / (Real(1) - std::ldexp(Real(1), -2 * n));
}

/// Iterates psi from (0, 0), recording b_N and c_N, and stops once both the
/// c_N increments and the gap c_N - b_N fall below rel_tol (relative to
/// max(1, c_N)) or max_iter is reached.
template <class Real>
BoundResult<Real> iterate_bound(const TorsionConstants<Real>& tc, const BoundConfig& cfg,
                                Variant variant) {
    cfg.validate();
    const PhiMap<Real> map(tc, variant);
    BoundResult<Real> result;
    result.variant_used = variant;
    std::array<Real, 2> alpha{0, 0};
    const Real tol = static_cast<Real>(cfg.rel_tol);
    for (int n = 1; n <= cfg.max_iter; ++n) {
        alpha = map.log_step(alpha);
        const Real b = std::max(alpha[0], alpha[1]);
        const Real c = geometric_factor<Real>(n) * b;
        if (!std::isfinite(c)) throw NumericBreakdown("iteration produced a non-finite value");
        result.iterates.push_back(alpha);
        result.b_seq.push_back(b);
        result.c_seq.push_back(c);
        result.iterations = n;
        if (n == 1) continue;
        const Real prev = result.c_seq[n - 2];
        if (c > prev + Real(1e-9)) {
            throw NonMonotoneSequence("c_N increased from " + std::to_string(double(prev)) +
                                      " to " + std::to_string(double(c)));
        }
        const Real scale = std::max(Real(1), std::abs(c));
        if (std::abs(c - prev) <= tol * scale && std::abs(c - b) <= tol * scale) break;
    }
    result.bound = result.c_seq.back() + static_cast<Real>(cfg.safety_slack);
    return result;
}

/// One-step bound (4/3) log |phi(1, 1)|, evaluated in the value domain.
template <class Real>
Real first_bound(const TorsionConstants<Real>& tc, Variant variant) {
    const auto v = PhiMap<Real>(tc, variant).value(1, 1);
    return Real(4) / Real(3) * std::log(std::max(v[0], v[1]));
}

/// Full pipeline for one curve at one place.
template <class Real>
BoundResult<Real> compute_bound(const CurveModel<Real>& c, PlaceSpec place, const BoundConfig& cfg) {
    cfg.validate();
    const Variant variant = resolve_variant(c, place, cfg.variant);
    return iterate_bound(torsion_constants(c, place), cfg, variant);
}

}  // namespace archheight
