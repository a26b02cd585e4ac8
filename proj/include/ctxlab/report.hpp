#ifndef CTXLAB_REPORT_HPP
#define CTXLAB_REPORT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ctxlab::report {

using json = nlohmann::json;

// One schema for every subcommand; sections that do not apply stay null.
// Serialization is deterministic: keys sorted, floats in fixed 12-decimal
// formatting, integers printed as integers. Re-running the same command with
// the same seed reproduces the same bytes except for the timing section.
struct Report {
    std::string tool = "ctxlab";
    std::string version;
    std::string command;
    json args = json::object();
    json inequality; // name, digest, metadata (null when not applicable)
    std::uint64_t seed = 0;
    int workers = 0;
    json results = json::object();
    double timing_seconds = 0.0;
};

json to_json(const Report& r);
Report from_json(const json& doc);

// Deterministic pretty-printer for any report tree.
std::string dump_deterministic(const json& value);

std::string serialize(const Report& r);
Report parse(const std::string& text);

// Serialized form with the timing section removed; used by determinism checks.
std::string strip_timing(const std::string& serialized);

// Fixed 12-decimal formatting used everywhere a float is printed.
std::string format_float(double v);

// Integer rendering for exact values, fixed formatting otherwise.
std::string format_value(double v, bool integral);

} // namespace ctxlab::report

#endif
