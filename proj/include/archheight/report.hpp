#pragma once

// Per-place bound reports and their structured (JSON lines) and table
// renderings. Output schema: docs/output_schema.md.

#include <array>
#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "archheight/bound_engine.hpp"
#include "archheight/curve_model.hpp"
#include "archheight/height_oracle.hpp"
#include "archheight/input.hpp"
#include "archheight/place.hpp"

namespace archheight {

inline constexpr int kSchemaVersion = 1;

struct ValidateOptions {
    int n_samples = 10000;
    int terms = 12;
    std::uint64_t seed = 0;
};

struct ValidationResult {
    int n_samples = 0;
    int terms = 0;
    std::uint64_t seed = 0;
    double empirical_max = 0;
    bool sound = false;
};

struct PlaceReport {
    PlaceKind place = PlaceKind::real;
    Variant variant_used = Variant::complex_formula;
    std::array<std::complex<double>, 3> two_torsion{};
    std::vector<double> c_seq;
    std::vector<double> b_seq;
    double bound = 0;
    int iterations = 0;
    double wall_time_s = 0;
    std::optional<double> bound_bruin;
    std::optional<ValidationResult> validation;
};

struct Report {
    std::optional<std::string> label;
    std::string curve;  ///< canonical coefficient list
    std::string precision;
    std::array<std::string, 4> b_invariants;  ///< b2, b4, b6, b8
    std::string discriminant;
    std::string discriminant_sign;  ///< "negative", "positive" or "nonreal"
    std::vector<PlaceReport> places;
};

template <class Real>
constexpr const char* precision_name() {
    if constexpr (std::is_same_v<Real, double>) return "double";
    else if constexpr (std::is_same_v<Real, long double>) return "long_double";
    else return "custom";
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class Real>
std::string scalar_text(const std::complex<Real>& v) {
    char buf[96];
    if (v.imag() == 0) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v.real()));
    } else {
        std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", static_cast<double>(v.real()),
                      static_cast<double>(v.imag()));
    }
    return buf;
}

}  // namespace detail

/// Seed used for the validation run of one place of one record.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return detail::splitmix64(base ^ detail::splitmix64(index));
}

/// Runs the bound pipeline at every requested place and, when asked,
/// checks it against sampled values of Psi. `sound` holds iff the sampled
/// maximum (value + tail) is at most bound + 1e-9.
template <class Real = double>
Report compute_report(const CurveInput& input, const BoundConfig& cfg,
                      const std::optional<ValidateOptions>& validate = std::nullopt,
                      bool bruin_normalization = false) {
    cfg.validate();
    const auto curve = CurveModel<Real>::from_a_invariants(input.a_invariants);
    const auto& ex = *curve.exact();

    Report report;
    report.label = input.label;
    report.curve = render_curve(input.a_invariants);
    report.precision = precision_name<Real>();
    report.b_invariants = {to_string(ex.b2), to_string(ex.b4), to_string(ex.b6), to_string(ex.b8)};
    report.discriminant = to_string(ex.disc);
    if (const auto sign = curve.disc_sign()) {
        report.discriminant_sign = *sign < 0 ? "negative" : "positive";
    } else {
        report.discriminant_sign = "nonreal";
    }

    for (std::size_t k = 0; k < input.places.size(); ++k) {
        const PlaceSpec place = input.places[k];
        PlaceReport entry;
        entry.place = place.kind;

        const auto start = std::chrono::steady_clock::now();
        const Variant variant = resolve_variant(curve, place, cfg.variant);
        const auto tc = torsion_constants(curve, place);
        const auto result = iterate_bound(tc, cfg, variant);
        entry.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        entry.variant_used = result.variant_used;
        for (int j = 0; j < 3; ++j) {
            entry.two_torsion[j] = {static_cast<double>(tc.xt[j].real()),
                                    static_cast<double>(tc.xt[j].imag())};
        }
        entry.c_seq.assign(result.c_seq.begin(), result.c_seq.end());
        entry.b_seq.assign(result.b_seq.begin(), result.b_seq.end());
        entry.bound = static_cast<double>(result.bound);
        entry.iterations = result.iterations;
        if (bruin_normalization) {
            entry.bound_bruin = entry.bound + static_cast<double>(curve.log_abs_disc()) / 6.0;
        }
        if (validate) {
            ValidationResult v;
            v.n_samples = validate->n_samples;
            v.terms = validate->terms;
            v.seed = derive_seed(validate->seed, k);
            v.empirical_max = static_cast<double>(
                empirical_max_psi(curve, place, v.n_samples, v.terms, v.seed));
            v.sound = v.empirical_max <= entry.bound + 1e-9;
            entry.validation = v;
        }
        report.places.push_back(std::move(entry));
    }
    return report;
}

inline nlohmann::ordered_json to_json(const Report& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "report";
    j["label"] = r.label ? J(*r.label) : J(nullptr);
    j["curve"] = r.curve;
    j["precision"] = r.precision;
    j["normalization"] = "naive_x";
    j["b_invariants"] = {{"b2", r.b_invariants[0]},
                         {"b4", r.b_invariants[1]},
                         {"b6", r.b_invariants[2]},
                         {"b8", r.b_invariants[3]}};
    j["discriminant"] = r.discriminant;
    j["discriminant_sign"] = r.discriminant_sign;
    J places = J::array();
    for (const auto& p : r.places) {
        J e;
        e["place"] = std::string(to_string(p.place));
        e["variant_used"] = std::string(to_string(p.variant_used));
        J xt = J::array();
        for (const auto& x : p.two_torsion) xt.push_back({x.real(), x.imag()});
        e["two_torsion_x"] = xt;
        e["c_seq"] = p.c_seq;
        e["b_seq"] = p.b_seq;
        e["iterations"] = p.iterations;
        e["bound"] = p.bound;
        if (p.bound_bruin) e["bound_bruin"] = *p.bound_bruin;
        e["wall_time_s"] = p.wall_time_s;
        if (p.validation) {
            const auto& v = *p.validation;
            e["validation"] = {{"n_samples", v.n_samples},
                               {"terms", v.terms},
                               {"seed", v.seed},
                               {"empirical_max", v.empirical_max},
                               {"sound", v.sound}};
        } else {
            e["validation"] = nullptr;
        }
        places.push_back(std::move(e));
    }
    j["places"] = std::move(places);
    return j;
}

/// Human-readable rendering; one line per place.
inline std::string to_table(const Report& r) {
    std::string out;
    char buf[256];
    for (const auto& p : r.places) {
        std::snprintf(buf, sizeof buf, "%-16s %-8s %-19s %14.9f %5d", r.label ? r.label->c_str() : "-",
                      std::string(to_string(p.place)).c_str(),
                      std::string(to_string(p.variant_used)).c_str(), p.bound, p.iterations);
        out += buf;
        if (p.bound_bruin) {
            std::snprintf(buf, sizeof buf, "  bruin=%.9f", *p.bound_bruin);
            out += buf;
        }
        if (p.validation) {
            std::snprintf(buf, sizeof buf, "  empirical_max=%.9f %s", p.validation->empirical_max,
                          p.validation->sound ? "sound" : "UNSOUND");
            out += buf;
        }
        out += "\n";
    }
    return out;
}

inline std::string table_header() {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-16s %-8s %-19s %14s %5s\n", "label", "place", "variant",
                  "bound", "iters");
    return buf;
}

}  // namespace archheight
