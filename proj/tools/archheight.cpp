// archheight: upper bounds for the archimedean local height difference of
// elliptic curves.
//
//   archheight compute --curve "[0,-1,1,-7820,-263580]" [--validate 10000]
//   archheight batch curves.txt --jobs 4
//
// Exit codes: 0 success, 1 math failure in compute mode, 2 usage, I/O or
// configuration error. Batch mode never fails on per-curve errors.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "archheight/archheight.hpp"

namespace {

using namespace archheight;

struct Options {
    std::string curve;
    std::vector<std::string> places;
    std::string label;
    std::string variant = "auto";
    double tol = 1e-9;
    int max_iter = 60;
    double slack = 1e-8;
    int validate = 0;
    int terms = 12;
    std::uint64_t seed = 0;
    bool table = false;
    bool bruin = false;
    std::string precision = "double";
    std::string batch_file;
    int jobs = 1;
};

constexpr int kExitMath = 1;
constexpr int kExitUsage = 2;

void add_common(CLI::App& cmd, Options& o) {
    cmd.add_option("--variant", o.variant, "auto | complex | real")
        ->check(CLI::IsMember({"auto", "complex", "real"}))
        ->envname("ARCHHEIGHT_VARIANT");
    cmd.add_option("--tol", o.tol, "relative stopping tolerance for c_N")->envname("ARCHHEIGHT_TOL");
    cmd.add_option("--max-iter", o.max_iter, "iteration cap")->envname("ARCHHEIGHT_MAX_ITER");
    cmd.add_option("--slack", o.slack, "additive safety slack")->envname("ARCHHEIGHT_SLACK");
    cmd.add_option("--validate", o.validate, "sample this many points and check the bound")
        ->envname("ARCHHEIGHT_VALIDATE");
    cmd.add_option("--terms", o.terms, "series terms for sampled Psi values")
        ->envname("ARCHHEIGHT_TERMS");
    cmd.add_option("--seed", o.seed, "base seed for sampling")->envname("ARCHHEIGHT_SEED");
    auto* json = cmd.add_flag("--json", "JSON lines output (default)");
    cmd.add_flag("--table", o.table, "human-readable table output")->excludes(json);
    cmd.add_flag("--bruin-normalization", o.bruin, "also report bound + log|disc|/6");
    cmd.add_option("--precision", o.precision, "floating type: double | long-double")
        ->check(CLI::IsMember({"double", "long-double"}))
        ->envname("ARCHHEIGHT_PRECISION");
}

BoundConfig bound_config(const Options& o) {
    BoundConfig cfg;
    cfg.rel_tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.safety_slack = o.slack;
    cfg.variant = *variant_from_string(o.variant);
    cfg.validate();
    return cfg;
}

std::optional<ValidateOptions> validate_options(const Options& o) {
    if (o.validate <= 0) return std::nullopt;
    if (o.terms < 1) throw ConfigError("--terms must be at least 1");
    return ValidateOptions{o.validate, o.terms, o.seed};
}

template <class Real>
int run_compute(const Options& o) {
    CurveInput input;
    try {
        input = parse_input(o.curve);
    } catch (const Error& e) {
        std::cerr << "archheight: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    }
    if (!o.label.empty()) input.label = o.label;
    if (!o.places.empty()) {
        std::vector<PlaceSpec> places;
        for (const auto& p : o.places) places.push_back(PlaceSpec{*place_from_string(p)});
        input.places = detail::normalize_places(std::move(places), input.is_real());
    }
    const BoundConfig cfg = bound_config(o);
    const auto validate = validate_options(o);
    try {
        const Report r = compute_report<Real>(input, cfg, validate, o.bruin);
        if (o.table) {
            std::cout << table_header() << to_table(r);
        } else {
            std::cout << to_json(r).dump() << "\n";
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        ErrorRecord rec{1, input.label, e.kind(), e.what()};
        if (o.table) {
            std::cout << "error: " << e.kind() << ": " << e.what() << "\n";
        } else {
            std::cout << to_json(rec).dump() << "\n";
        }
        return kExitMath;
    }
    return 0;
}

template <class Real>
int run_batch(const Options& o) {
    BatchOptions opts;
    opts.bound = bound_config(o);
    opts.validate = validate_options(o);
    opts.bruin_normalization = o.bruin;
    opts.parallelism = o.jobs;
    if (o.table) std::cout << table_header();
    const auto summary = batch_run<Real>(o.batch_file, opts, [&](const BatchEntry& entry) {
        if (const auto* r = std::get_if<Report>(&entry.result)) {
            if (o.table) {
                std::cout << to_table(*r);
            } else {
                std::cout << to_json(*r).dump() << "\n";
            }
        } else {
            const auto& e = std::get<ErrorRecord>(entry.result);
            if (o.table) {
                std::cout << "line " << e.line << ": error: " << e.kind << ": " << e.message << "\n";
            } else {
                std::cout << to_json(e).dump() << "\n";
            }
        }
    });
    if (o.table) {
        std::cout << "records=" << summary.records << " ok=" << summary.ok
                  << " errors=" << summary.errors << " mean_bound=" << summary.mean_bound
                  << " mean_wall_time_s=" << summary.mean_wall_time_s << "\n";
    } else {
        std::cout << to_json(summary).dump() << "\n";
    }
    return 0;
}

template <class Real>
int dispatch(bool batch, const Options& o) {
    return batch ? run_batch<Real>(o) : run_compute<Real>(o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upper bounds for archimedean local height differences on elliptic curves"};
    app.require_subcommand(1);
    Options o;

    auto* compute = app.add_subcommand("compute", "bound one curve");
    compute->add_option("--curve", o.curve, "[a1,a2,a3,a4,a6] or a JSON record")->required();
    compute->add_option("--place", o.places, "real | complex (repeatable)")
        ->check(CLI::IsMember({"real", "complex"}));
    compute->add_option("--label", o.label, "label echoed in the report");
    add_common(*compute, o);

    auto* batch = app.add_subcommand("batch", "bound every record of a line-delimited file");
    batch->add_option("file", o.batch_file, "input file, one record per line")->required();
    batch->add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->envname("ARCHHEIGHT_JOBS");
    add_common(*batch, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const bool is_batch = batch->parsed();
    try {
        if (o.precision == "long-double") return dispatch<long double>(is_batch, o);
        return dispatch<double>(is_batch, o);
    } catch (const Error& e) {
        std::cerr << "archheight: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    }
}
