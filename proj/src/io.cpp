#include "ctxlab/io.hpp"

#include <fstream>

namespace ctxlab::io {

namespace {

json parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
    }
    return doc;
}

const json& require(const json& doc, const char* key)
{
    if (!doc.contains(key)) throw std::invalid_argument(std::string("missing required field '") + key + "'");
    return doc.at(key);
}

} // namespace

Model model_from_json(const json& doc)
{
    const int n = require(doc, "n").get<int>();
    auto labels = require(doc, "labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("field 'labels' has " + std::to_string(labels.size()) +
                                    " entries but n=" + std::to_string(n));
    auto initial = require(doc, "initial").get<std::vector<double>>();

    const json& kj = require(doc, "kernel");
    const auto type = require(kj, "type").get<std::string>();
    TransitionKernel kernel;
    if (type == "identity") {
        kernel = TransitionKernel::identity();
    } else if (type == "deterministic") {
        kernel = TransitionKernel::deterministic(require(kj, "map").get<std::vector<std::uint32_t>>());
    } else if (type == "dense") {
        const json& rows = require(kj, "rows");
        if (!rows.is_array()) throw std::invalid_argument("kernel 'rows' must be an array of arrays");
        std::vector<double> flat;
        const std::size_t dim = rows.size();
        flat.reserve(dim * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto row = rows.at(i).get<std::vector<double>>();
            if (row.size() != dim)
                throw std::invalid_argument("kernel row " + std::to_string(i) + " has " +
                                            std::to_string(row.size()) + " entries, expected " +
                                            std::to_string(dim));
            flat.insert(flat.end(), row.begin(), row.end());
        }
        kernel = TransitionKernel::dense(std::move(flat), dim);
    } else {
        throw std::invalid_argument("unknown kernel type '" + type + "'");
    }
    return Model(std::move(labels), std::move(initial), std::move(kernel));
}

json model_to_json(const Model& m)
{
    json doc;
    doc["n"] = m.n;
    doc["labels"] = m.labels;
    doc["initial"] = m.initial;
    json kj;
    switch (m.kernel.kind) {
        case TransitionKernel::Kind::Identity:
            kj["type"] = "identity";
            break;
        case TransitionKernel::Kind::Deterministic:
            kj["type"] = "deterministic";
            kj["map"] = m.kernel.map;
            break;
        case TransitionKernel::Kind::Dense: {
            kj["type"] = "dense";
            const std::size_t d = m.dim();
            json rows = json::array();
            for (std::size_t i = 0; i < d; ++i) {
                rows.push_back(std::vector<double>(m.kernel.rows.begin() + static_cast<std::ptrdiff_t>(i * d),
                                                   m.kernel.rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)));
            }
            kj["rows"] = std::move(rows);
            break;
        }
    }
    doc["kernel"] = std::move(kj);
    return doc;
}

Model load_model_file(const std::string& path)
{
    try {
        return model_from_json(parse_file(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument("invalid model file '" + path + "': " + e.what());
    }
}

InequalitySpec inequality_from_json(const json& doc, const std::string& fallback_name)
{
    auto labels = require(doc, "labels").get<std::vector<std::string>>();
    const json& tj = require(doc, "terms");
    if (!tj.is_array() || tj.empty()) throw std::invalid_argument("field 'terms' must be a non-empty array");
    std::vector<SequenceTerm> terms;
    terms.reserve(tj.size());
    for (const auto& item : tj) {
        SequenceTerm t;
        t.coefficient = require(item, "coeff").get<double>();
        t.sequence = require(item, "seq").get<std::vector<std::string>>();
        terms.push_back(std::move(t));
    }
    const Direction dir = direction_from_string(require(doc, "direction").get<std::string>());
    std::optional<double> classical, quantum;
    if (doc.contains("classical_bound")) classical = doc.at("classical_bound").get<double>();
    if (doc.contains("quantum_bound")) quantum = doc.at("quantum_bound").get<double>();
    const std::string name = doc.value("name", fallback_name);
    return InequalitySpec(name, std::move(labels), std::move(terms), dir, classical, quantum);
}

json inequality_to_json(const InequalitySpec& spec)
{
    json doc;
    doc["name"] = spec.name();
    doc["labels"] = spec.labels();
    json terms = json::array();
    for (const auto& t : spec.terms()) {
        json item;
        item["coeff"] = t.coefficient;
        item["seq"] = t.sequence;
        terms.push_back(std::move(item));
    }
    doc["terms"] = std::move(terms);
    doc["direction"] = to_string(spec.direction());
    if (spec.classical_bound()) doc["classical_bound"] = *spec.classical_bound();
    if (spec.quantum_bound()) doc["quantum_bound"] = *spec.quantum_bound();
    return doc;
}

InequalitySpec load_inequality_file(const std::string& path)
{
    try {
        std::string name = path;
        const auto slash = name.find_last_of('/');
        if (slash != std::string::npos) name = name.substr(slash + 1);
        const auto dot = name.find_last_of('.');
        if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
        return inequality_from_json(parse_file(path), name);
    } catch (const json::exception& e) {
        throw std::invalid_argument("invalid inequality file '" + path + "': " + e.what());
    }
}

} // namespace ctxlab::io
