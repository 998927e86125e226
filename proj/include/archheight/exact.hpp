#pragma once

// Exact Gaussian-rational scalars for lossless coefficient input.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "archheight/errors.hpp"

namespace archheight {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// An element re + i*im of Q(i).
struct ExactComplex {
    Rational re{0};
    Rational im{0};

    ExactComplex() = default;
    ExactComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    ExactComplex(long long v) : re(v) {}  // NOLINT

    bool is_real() const { return im == 0; }
    bool is_zero() const { return re == 0 && im == 0; }

    friend bool operator==(const ExactComplex&, const ExactComplex&) = default;

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator*(long long k, const ExactComplex& a) {
        return {Rational(k) * a.re, Rational(k) * a.im};
    }

    /// Single correctly rounded conversion of each part.
    template <class Real>
    std::complex<Real> to_complex() const {
        return {re.template convert_to<Real>(), im.template convert_to<Real>()};
    }
};

namespace detail {

inline double log_abs_int(const BigInt& v) {
    BigInt a = abs(v);
    if (a == 0) return -HUGE_VAL;
    const std::size_t bits = boost::multiprecision::msb(a) + 1;
    if (bits <= 900) return std::log(a.convert_to<double>());
    const std::size_t shift = bits - 64;
    BigInt top = a >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace detail

/// log|q| without overflowing for very large numerators or denominators.
inline double log_abs(const Rational& q) {
    return detail::log_abs_int(numerator(q)) - detail::log_abs_int(denominator(q));
}

/// log|z| for z in Q(i).
inline double log_abs(const ExactComplex& z) {
    if (z.is_real()) return log_abs(z.re);
    Rational norm = z.re * z.re + z.im * z.im;
    return 0.5 * log_abs(norm);
}

inline std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

/// Canonical text: "p/q" for reals, "(re,im)" for non-real values.
inline std::string to_string(const ExactComplex& z) {
    if (z.is_real()) return to_string(z.re);
    return "(" + to_string(z.re) + "," + to_string(z.im) + ")";
}

/// Parses a real literal: an integer, "p/q", or a decimal with optional
/// exponent ("-1.25e3"). Decimals are converted exactly. `column` is the
/// 1-based column of `text[0]` for error reporting.
inline Rational parse_rational(std::string_view text, std::size_t line = 1,
                               std::size_t column = 1) {
    constexpr long kMaxExponent = 100000;
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> Rational {
        throw ParseError(what + " in number '" + std::string(text) + "'", line, column + pos);
    };
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    const std::size_t int_begin = pos;
    while (pos < text.size() && is_digit(text[pos])) ++pos;
    if (pos == int_begin) return fail("expected digits");
    BigInt mantissa(std::string(text.substr(int_begin, pos - int_begin)));

    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        const std::size_t den_begin = pos;
        while (pos < text.size() && is_digit(text[pos])) ++pos;
        if (pos == den_begin) return fail("expected denominator digits");
        if (pos != text.size()) return fail("unexpected character");
        BigInt den(std::string(text.substr(den_begin, pos - den_begin)));
        if (den == 0) return fail("zero denominator");
        Rational q(mantissa, den);
        return negative ? Rational(-q) : q;
    }

    long scale = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t frac_begin = pos;
        while (pos < text.size() && is_digit(text[pos])) ++pos;
        if (pos == frac_begin) return fail("expected fraction digits");
        const std::string_view frac = text.substr(frac_begin, pos - frac_begin);
        mantissa = mantissa * pow(BigInt(10), static_cast<unsigned>(frac.size())) +
                   BigInt(std::string(frac));
        scale -= static_cast<long>(frac.size());
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        const std::size_t exp_begin = pos;
        long exponent = 0;
        while (pos < text.size() && is_digit(text[pos])) {
            exponent = exponent * 10 + (text[pos] - '0');
            if (exponent > kMaxExponent) return fail("exponent out of range");
            ++pos;
        }
        if (pos == exp_begin) return fail("expected exponent digits");
        scale += exp_negative ? -exponent : exponent;
    }
    if (pos != text.size()) return fail("unexpected character");

    Rational q(mantissa);
    if (scale > 0) q *= Rational(pow(BigInt(10), static_cast<unsigned>(scale)));
    if (scale < 0) q /= Rational(pow(BigInt(10), static_cast<unsigned>(-scale)));
    return negative ? Rational(-q) : q;
}

}  // namespace archheight
