#pragma once

// Curve input grammar. A curve is written
//
//   [c1, c2, c3, c4, c6]
//
// where each coefficient is an integer, "p/q", a decimal ("-1.5e3", read
// exactly) or a complex pair "(re, im)" of such reals. A batch record is
// either a bare curve or a JSON object
//
//   {"curve": "[...]", "label": "11a2", "places": ["real", "complex"]}
//
// where "curve" may also be an array of five coefficient strings.

#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "archheight/errors.hpp"
#include "archheight/exact.hpp"
#include "archheight/place.hpp"

namespace archheight {

struct CurveInput {
    std::array<ExactComplex, 5> a_invariants;
    std::vector<PlaceSpec> places;
    std::optional<std::string> label;

    bool is_real() const {
        for (const auto& v : a_invariants)
            if (!v.is_real()) return false;
        return true;
    }

    friend bool operator==(const CurveInput&, const CurveInput&) = default;
};

namespace detail {

class CurveListParser {
public:
    CurveListParser(std::string_view text, std::size_t line, std::size_t column0)
        : text_(text), line_(line), column0_(column0) {}

    std::array<ExactComplex, 5> parse() {
        skip_ws();
        expect('[');
        std::vector<ExactComplex> coeffs;
        skip_ws();
        if (peek() == ']') {
            ++pos_;
        } else {
            while (true) {
                coeffs.push_back(coefficient());
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect(']');
                break;
            }
        }
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after ']'");
        if (coeffs.size() != 5) {
            throw ArityError("expected 5 Weierstrass coefficients [a1,a2,a3,a4,a6], got " +
                             std::to_string(coeffs.size()));
        }
        std::array<ExactComplex, 5> out;
        for (std::size_t i = 0; i < 5; ++i) out[i] = std::move(coeffs[i]);
        return out;
    }

    ExactComplex parse_single() {
        ExactComplex v = coefficient();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after coefficient");
        return v;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line_, column0_ + pos_);
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Rational real() {
        skip_ws();
        const std::size_t begin = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ',' || c == ']' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
            ++pos_;
        }
        if (pos_ == begin) fail("expected a number");
        return parse_rational(text_.substr(begin, pos_ - begin), line_, column0_ + begin);
    }

    ExactComplex coefficient() {
        skip_ws();
        if (peek() != '(') return ExactComplex(real());
        ++pos_;
        Rational re = real();
        skip_ws();
        expect(',');
        Rational im = real();
        skip_ws();
        expect(')');
        return {std::move(re), std::move(im)};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column0_;
};

inline std::vector<PlaceSpec> normalize_places(std::vector<PlaceSpec> places, bool real_curve) {
    if (places.empty()) places.push_back(real_curve ? real_place : complex_place);
    if (!real_curve)
        for (auto& p : places) p = complex_place;
    return places;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses "[a1,a2,a3,a4,a6]".
inline std::array<ExactComplex, 5> parse_curve_list(std::string_view text, std::size_t line = 1,
                                                    std::size_t column = 1) {
    return detail::CurveListParser(text, line, column).parse();
}

/// Parses a bare curve list or a JSON record. Places default to one real
/// place for real coefficients and one complex place otherwise; non-real
/// coefficients turn every listed place into a complex place.
inline CurveInput parse_input(std::string_view text, std::size_t line = 1) {
    const std::string_view body = detail::trim(text);
    const std::size_t column0 = static_cast<std::size_t>(body.data() - text.data()) + 1;
    CurveInput input;
    if (body.empty() || body.front() != '{') {
        input.a_invariants = parse_curve_list(body, line, column0);
        input.places = detail::normalize_places({}, input.is_real());
        return input;
    }

    nlohmann::json record;
    try {
        record = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON record: ") + e.what(), line,
                         column0 + (e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!record.is_object()) throw ParseError("record must be a JSON object", line, column0);

    std::vector<PlaceSpec> places;
    bool have_curve = false;
    for (const auto& [key, value] : record.items()) {
        if (key == "curve") {
            have_curve = true;
            if (value.is_string()) {
                input.a_invariants = parse_curve_list(value.get<std::string>(), line, 1);
            } else if (value.is_array()) {
                if (value.size() != 5) {
                    throw ArityError("expected 5 Weierstrass coefficients, got " +
                                     std::to_string(value.size()));
                }
                for (std::size_t i = 0; i < 5; ++i) {
                    const auto& v = value[i];
                    if (v.is_string()) {
                        const std::string s = v.get<std::string>();
                        input.a_invariants[i] = detail::CurveListParser(s, line, 1).parse_single();
                    } else if (v.is_number_integer()) {
                        input.a_invariants[i] = ExactComplex(v.get<long long>());
                    } else {
                        throw ParseError("coefficients must be strings or integers", line, column0);
                    }
                }
            } else {
                throw ParseError("\"curve\" must be a string or an array", line, column0);
            }
        } else if (key == "label") {
            if (!value.is_string()) throw ParseError("\"label\" must be a string", line, column0);
            input.label = value.get<std::string>();
        } else if (key == "places" || key == "place") {
            const auto add = [&](const nlohmann::json& v) {
                const auto kind = v.is_string() ? place_from_string(v.get<std::string>()) : std::nullopt;
                if (!kind) throw ParseError("place must be \"real\" or \"complex\"", line, column0);
                places.push_back(PlaceSpec{*kind});
            };
            if (value.is_array()) {
                for (const auto& v : value) add(v);
            } else {
                add(value);
            }
        } else {
            throw ParseError("unknown record key \"" + key + "\"", line, column0);
        }
    }
    if (!have_curve) throw ParseError("record has no \"curve\"", line, column0);
    input.places = detail::normalize_places(std::move(places), input.is_real());
    return input;
}

inline std::string render_curve(const std::array<ExactComplex, 5>& a) {
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) {
        if (i) s += ",";
        s += to_string(a[i]);
    }
    return s + "]";
}

/// Canonical one-line JSON record; parse_input(render_input(x)) == x.
inline std::string render_input(const CurveInput& input) {
    nlohmann::ordered_json j;
    j["curve"] = render_curve(input.a_invariants);
    if (input.label) j["label"] = *input.label;
    j["places"] = nlohmann::ordered_json::array();
    for (const auto& p : input.places) j["places"].push_back(std::string(to_string(p.kind)));
    return j.dump();
}

}  // namespace archheight
