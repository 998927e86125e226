#pragma once

#include <optional>
#include <string_view>

namespace archheight {

/// Kind of archimedean place at which a local bound is computed.
enum class PlaceKind { real, complex };

inline constexpr std::string_view to_string(PlaceKind kind) {
    return kind == PlaceKind::real ? "real" : "complex";
}

inline std::optional<PlaceKind> place_from_string(std::string_view s) {
    if (s == "real") return PlaceKind::real;
    if (s == "complex") return PlaceKind::complex;
    return std::nullopt;
}

struct PlaceSpec {
    PlaceKind kind = PlaceKind::real;

    friend bool operator==(const PlaceSpec&, const PlaceSpec&) = default;
};

inline constexpr PlaceSpec real_place{PlaceKind::real};
inline constexpr PlaceSpec complex_place{PlaceKind::complex};

}  // namespace archheight
