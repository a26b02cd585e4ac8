#ifndef CTXLAB_IO_HPP
#define CTXLAB_IO_HPP

#include <string>

#include <json.hpp>

#include "ctxlab/inequality.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab::io {

using json = nlohmann::json;

// Model document: {"n", "labels", "initial", "kernel"} with kernel one of
//   {"type": "identity"}
//   {"type": "deterministic", "map": [targets...]}
//   {"type": "dense", "rows": [[row...], ...]}
Model model_from_json(const json& doc);
json model_to_json(const Model& m);
Model load_model_file(const std::string& path);

// Inequality document: {"labels", "terms": [{"coeff", "seq"}...], "direction",
// optional "name", "classical_bound", "quantum_bound"}.
InequalitySpec inequality_from_json(const json& doc, const std::string& fallback_name = "custom");
json inequality_to_json(const InequalitySpec& spec);
InequalitySpec load_inequality_file(const std::string& path);

} // namespace ctxlab::io

#endif
