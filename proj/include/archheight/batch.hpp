#pragma once

// Line-delimited batch driver. Records are processed by a worker pool in
// chunks and emitted in input order; per-record failures become error
// records instead of aborting the run.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "archheight/errors.hpp"
#include "archheight/input.hpp"
#include "archheight/report.hpp"

namespace archheight {

struct ErrorRecord {
    std::size_t line = 0;
    std::optional<std::string> label;
    std::string kind;
    std::string message;
};

struct BatchEntry {
    std::size_t line = 0;
    std::variant<Report, ErrorRecord> result;

    bool ok() const { return std::holds_alternative<Report>(result); }
};

struct BatchSummary {
    std::size_t records = 0;
    std::size_t ok = 0;
    std::size_t errors = 0;
    double mean_bound = 0;        ///< over all place entries of successful records
    double mean_wall_time_s = 0;  ///< per successful record, summed over its places
};

struct BatchOptions {
    BoundConfig bound;
    std::optional<ValidateOptions> validate;
    bool bruin_normalization = false;
    int parallelism = 1;
    std::size_t chunk_size = 4096;
};

inline nlohmann::ordered_json to_json(const ErrorRecord& e) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "error";
    j["line"] = e.line;
    j["label"] = e.label ? nlohmann::ordered_json(*e.label) : nlohmann::ordered_json(nullptr);
    j["error"] = {{"type", e.kind}, {"message", e.message}};
    return j;
}

inline nlohmann::ordered_json to_json(const BatchSummary& s) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "summary";
    j["records"] = s.records;
    j["ok"] = s.ok;
    j["errors"] = s.errors;
    j["mean_bound"] = s.mean_bound;
    j["mean_wall_time_s"] = s.mean_wall_time_s;
    return j;
}

namespace detail {

inline bool is_record_line(const std::string& line) {
    const auto t = trim(line);
    return !t.empty() && t.front() != '#';
}

template <class Real>
BatchEntry process_line(const std::string& text, std::size_t line, const BatchOptions& opts) {
    BatchEntry entry{line, ErrorRecord{}};
    std::optional<std::string> label;
    try {
        const CurveInput input = parse_input(text, line);
        label = input.label;
        std::optional<ValidateOptions> validate = opts.validate;
        if (validate) validate->seed = derive_seed(validate->seed, line);
        entry.result = compute_report<Real>(input, opts.bound, validate, opts.bruin_normalization);
    } catch (const Error& e) {
        entry.result = ErrorRecord{line, label, e.kind(), e.what()};
    } catch (const std::exception& e) {
        entry.result = ErrorRecord{line, label, "InternalError", e.what()};
    }
    return entry;
}

}  // namespace detail

/// Processes every record of `in`, calling `sink` once per record in input
/// order. Blank lines and lines starting with '#' are skipped; line numbers
/// in error records are 1-based physical lines.
template <class Real = double>
BatchSummary batch_run(std::istream& in, const BatchOptions& opts,
                       const std::function<void(const BatchEntry&)>& sink) {
    opts.bound.validate();
    const std::size_t workers =
        opts.parallelism > 0 ? static_cast<std::size_t>(opts.parallelism)
                             : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    BatchSummary summary;
    double bound_sum = 0, time_sum = 0;
    std::size_t bound_count = 0;

    std::vector<std::pair<std::size_t, std::string>> chunk;
    std::vector<BatchEntry> done;
    std::size_t line_no = 0;
    std::string text;
    bool eof = false;
    while (!eof) {
        chunk.clear();
        while (chunk.size() < std::max<std::size_t>(1, opts.chunk_size)) {
            if (!std::getline(in, text)) {
                eof = true;
                break;
            }
            ++line_no;
            if (detail::is_record_line(text)) chunk.emplace_back(line_no, text);
        }
        if (in.bad()) throw IoError("read error on batch input");
        done.assign(chunk.size(), BatchEntry{});

        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < chunk.size(); i = next++) {
                done[i] = detail::process_line<Real>(chunk[i].second, chunk[i].first, opts);
            }
        };
        const std::size_t n_threads = std::min(workers, chunk.size());
        if (n_threads <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(n_threads);
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
        }

        for (const auto& entry : done) {
            ++summary.records;
            if (const auto* report = std::get_if<Report>(&entry.result)) {
                ++summary.ok;
                double t = 0;
                for (const auto& p : report->places) {
                    bound_sum += p.bound;
                    ++bound_count;
                    t += p.wall_time_s;
                }
                time_sum += t;
            } else {
                ++summary.errors;
            }
            sink(entry);
        }
    }
    if (bound_count) summary.mean_bound = bound_sum / static_cast<double>(bound_count);
    if (summary.ok) summary.mean_wall_time_s = time_sum / static_cast<double>(summary.ok);
    return summary;
}

template <class Real = double>
BatchSummary batch_run(const std::string& path, const BatchOptions& opts,
                       const std::function<void(const BatchEntry&)>& sink) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open batch file '" + path + "'");
    return batch_run<Real>(in, opts, sink);
}

}  // namespace archheight
