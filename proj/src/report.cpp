#include "ctxlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ctxlab::report {

std::string format_float(double v)
{
    if (!std::isfinite(v)) throw std::invalid_argument("reports only carry finite numbers");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos) s = "0.000000000000"; // normalize -0
    return s;
}

std::string format_value(double v, bool integral)
{
    if (integral) return std::to_string(static_cast<long long>(std::llround(v)));
    return format_float(v);
}

namespace {

void dump_rec(const json& v, std::string& out, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, val] : v.items()) {
                out += pad_in + json(key).dump() + ": ";
                dump_rec(val, out, indent + 1);
                if (++i < v.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                out += pad_in;
                dump_rec(v.at(i), out, indent + 1);
                if (i + 1 < v.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_float(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

} // namespace

std::string dump_deterministic(const json& value)
{
    std::string out;
    dump_rec(value, out, 0);
    return out;
}

json to_json(const Report& r)
{
    json doc;
    doc["tool"] = r.tool;
    doc["version"] = r.version;
    doc["command"] = r.command;
    doc["args"] = r.args;
    doc["inequality"] = r.inequality.is_null() ? json() : r.inequality;
    doc["seed"] = r.seed;
    doc["workers"] = r.workers;
    doc["results"] = r.results;
    doc["timing"] = json{{"seconds", r.timing_seconds}};
    return doc;
}

Report from_json(const json& doc)
{
    Report r;
    r.tool = doc.at("tool").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    r.command = doc.at("command").get<std::string>();
    r.args = doc.at("args");
    r.inequality = doc.at("inequality");
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.workers = doc.at("workers").get<int>();
    r.results = doc.at("results");
    r.timing_seconds = doc.at("timing").at("seconds").get<double>();
    return r;
}

std::string serialize(const Report& r) { return dump_deterministic(to_json(r)) + "\n"; }

Report parse(const std::string& text) { return from_json(json::parse(text)); }

std::string strip_timing(const std::string& serialized)
{
    json doc = json::parse(serialized);
    doc.erase("timing");
    return dump_deterministic(doc) + "\n";
}

} // namespace ctxlab::report
