#include "ctxlab/commands.hpp"

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "ctxlab/acceptance.hpp"
#include "ctxlab/bounds.hpp"
#include "ctxlab/io.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/report.hpp"
#include "ctxlab/sampling.hpp"

namespace ctxlab::cli {

namespace {

using io::json;

class Stopwatch {
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct CommonArgs {
    std::string inequality;
    std::string file;
    std::string output = "text";
    int workers = 0;
};

// Either a named catalog entry or a spec loaded from --file.
InequalitySpec resolve_spec(const CommonArgs& c)
{
    if (!c.file.empty()) return io::load_inequality_file(c.file);
    if (c.inequality.empty()) throw std::invalid_argument("provide --inequality <name> or --file <path>");
    return catalog(c.inequality);
}

json spec_summary(const InequalitySpec& spec)
{
    json j;
    j["name"] = spec.name();
    j["digest"] = spec_digest(spec);
    j["labels"] = spec.labels();
    j["terms"] = spec.terms().size();
    j["max_length"] = spec.max_length();
    j["direction"] = to_string(spec.direction());
    j["classical_bound"] = spec.classical_bound() ? json(*spec.classical_bound()) : json();
    j["quantum_bound"] = spec.quantum_bound() ? json(*spec.quantum_bound()) : json();
    return j;
}

json witness_to_json(const Evolution& evo, int n)
{
    json j;
    j["indices"] = evo.states;
    json patterns = json::array();
    for (auto s : evo.states) patterns.push_back(Assignment(s, n).pattern());
    j["patterns"] = std::move(patterns);
    return j;
}

json bound_to_json(const engine::BoundResult& r, const InequalitySpec& spec)
{
    json j;
    j["value"] = r.integral ? json(static_cast<std::int64_t>(std::llround(r.value))) : json(r.value);
    j["integral"] = r.integral;
    j["evaluated_count"] = r.evaluated_count;
    json wits = json::array();
    for (const auto& w : r.witnesses) wits.push_back(witness_to_json(w, spec.n()));
    j["witnesses"] = std::move(wits);
    return j;
}

std::string witness_text(const Evolution& evo, int n)
{
    std::string s = "(";
    for (std::size_t k = 0; k < evo.states.size(); ++k) {
        if (k) s += ", ";
        s += std::to_string(evo.states[k]);
    }
    s += ")  ";
    for (std::size_t k = 0; k < evo.states.size(); ++k) {
        if (k) s += " -> ";
        s += Assignment(evo.states[k], n).pattern();
    }
    return s;
}

report::Report base_report(const std::string& command, json args, std::uint64_t seed, int workers)
{
    report::Report r;
    r.version = kVersion;
    r.command = command;
    r.args = std::move(args);
    r.seed = seed;
    r.workers = workers;
    return r;
}

void emit(const report::Report& r, const std::string& output, std::ostream& out, const std::string& text)
{
    if (output == "json")
        out << report::serialize(r);
    else
        out << text;
}

// ---- subcommand handlers ---------------------------------------------------

int cmd_catalog(const CommonArgs& common, std::ostream& out)
{
    Stopwatch timer;
    auto rep = base_report("catalog", json{{"output", common.output}}, 0, 0);
    json list = json::array();
    std::ostringstream text;
    text << std::left << std::setw(12) << "name" << std::setw(10) << "labels" << std::setw(8) << "terms"
         << std::setw(6) << "L" << std::setw(12) << "direction" << std::setw(12) << "classical"
         << "quantum\n";
    for (const auto& name : catalog_names()) {
        const auto& spec = catalog(name);
        list.push_back(spec_summary(spec));
        text << std::left << std::setw(12) << name << std::setw(10) << spec.labels().size() << std::setw(8)
             << spec.terms().size() << std::setw(6) << spec.max_length() << std::setw(12)
             << to_string(spec.direction()) << std::setw(12)
             << report::format_value(*spec.classical_bound(), true)
             << report::format_float(*spec.quantum_bound()) << "\n";
    }
    text << catalog_names().size() << " inequalities\n";
    rep.results["catalog"] = std::move(list);
    rep.timing_seconds = timer.seconds();
    emit(rep, common.output, out, text.str());
    return 0;
}

int cmd_bounds(const CommonArgs& common, const std::string& mode, std::ostream& out)
{
    if (mode != "static" && mode != "evolving" && mode != "certify")
        throw std::invalid_argument("--mode must be static, evolving or certify");

    const InequalitySpec spec = resolve_spec(common);
    engine::SearchOptions opts;
    opts.threads = common.workers;

    Stopwatch timer;
    auto rep = base_report("bounds",
                           json{{"inequality", common.inequality},
                                {"file", common.file},
                                {"mode", mode},
                                {"workers", common.workers},
                                {"output", common.output}},
                           0, common.workers);
    rep.inequality = spec_summary(spec);

    std::ostringstream text;
    text << "inequality: " << spec.name() << "\n";
    text << "mode: " << mode << "\n";
    auto describe = [&](const char* label, const engine::BoundResult& r) {
        text << label << ": " << report::format_value(r.value, r.integral) << "\n";
        text << "evaluated: " << r.evaluated_count << "\n";
        if (!r.witnesses.empty()) {
            text << "witnesses (cap " << engine::kWitnessCap << "):\n";
            for (const auto& w : r.witnesses) text << "  " << witness_text(w, spec.n()) << "\n";
        }
    };

    if (mode == "certify") {
        const auto cert = engine::certify(spec, opts);
        rep.results["certify"] =
            json{{"robust", cert.robust},
                 {"static", bound_to_json(cert.static_result, spec)},
                 {"evolving", bound_to_json(cert.evolving_result, spec)}};
        text << "static bound: "
             << report::format_value(cert.static_result.value, cert.static_result.integral) << "\n";
        text << "evolving bound: "
             << report::format_value(cert.evolving_result.value, cert.evolving_result.integral) << "\n";
        text << "robust: " << (cert.robust ? "true" : "false") << "\n";
    } else {
        const auto result = mode == "static" ? engine::static_bound(spec) : engine::evolving_bound(spec, opts);
        json bj = bound_to_json(result, spec);
        bj["mode"] = mode;
        rep.results["bound"] = std::move(bj);
        describe("value", result);
    }
    rep.timing_seconds = timer.seconds();
    text << "time: " << report::format_float(rep.timing_seconds) << " s\n";
    emit(rep, common.output, out, text.str());
    return 0;
}

int cmd_quantum(const CommonArgs& common, std::string scenario_name, const std::string& state,
                std::uint64_t seed, std::ostream& out)
{
    const InequalitySpec spec = resolve_spec(common);
    if (scenario_name.empty()) {
        // default: the inequality's base scenario (strip a trailing "_star")
        scenario_name = spec.name();
        if (const auto pos = scenario_name.rfind("_star"); pos != std::string::npos)
            scenario_name = scenario_name.substr(0, pos);
    }
    const auto& bundle = quantum::scenario(scenario_name);

    quantum::DensityState rho = bundle.recommended_state;
    if (state == "random") {
        auto rng = mc::SplitMix64::substream(seed, 0);
        rho = quantum::random_density_state(bundle.scenario.dimension, rng);
    } else if (state != "recommended") {
        throw std::invalid_argument("--state must be 'recommended' or 'random'");
    }

    Stopwatch timer;
    auto rep = base_report("quantum",
                           json{{"inequality", common.inequality},
                                {"file", common.file},
                                {"scenario", scenario_name},
                                {"state", state},
                                {"seed", seed},
                                {"output", common.output}},
                           seed, 0);
    rep.inequality = spec_summary(spec);

    const double value = quantum::quantum_value(spec, bundle.scenario, rho);
    rep.results["quantum"] = json{{"scenario", scenario_name},
                                  {"state", state},
                                  {"dimension", bundle.scenario.dimension},
                                  {"value", value}};
    rep.timing_seconds = timer.seconds();

    std::ostringstream text;
    text << "inequality: " << spec.name() << "\n";
    text << "scenario: " << scenario_name << " (dimension " << bundle.scenario.dimension << ")\n";
    text << "state: " << state;
    if (state == "random") text << " (seed " << seed << ")";
    text << "\n";
    text << "value: " << report::format_float(value) << "\n";
    emit(rep, common.output, out, text.str());
    return 0;
}

int cmd_simulate(const CommonArgs& common, const std::string& model_file, std::uint64_t shots,
                 std::uint64_t seed, bool with_error_terms, std::ostream& out)
{
    if (model_file.empty()) throw std::invalid_argument("--model-file is required");
    const InequalitySpec spec = resolve_spec(common);
    const Model model = io::load_model_file(model_file);

    Stopwatch timer;
    auto rep = base_report("simulate",
                           json{{"inequality", common.inequality},
                                {"file", common.file},
                                {"model_file", model_file},
                                {"shots", shots},
                                {"seed", seed},
                                {"with_error_terms", with_error_terms},
                                {"workers", common.workers},
                                {"output", common.output}},
                           seed, common.workers);
    rep.inequality = spec_summary(spec);

    const mc::RunConfig cfg{shots, seed};
    const auto est = mc::estimate_inequality(spec, model, cfg, common.workers);
    const double exact = model_expectation(spec, model);

    rep.results["estimate"] = json{{"mean", est.mean},
                                   {"std_error", est.std_error},
                                   {"shots", est.shots},
                                   {"per_term_means", est.per_term_means}};
    rep.results["exact"] = json{{"model_expectation", exact}};

    std::ostringstream text;
    text << "inequality: " << spec.name() << "\n";
    text << "model: " << model_file << " (n=" << model.n << ")\n";
    text << "shots: " << shots << "  seed: " << seed << "\n";
    text << "estimate: " << report::format_float(est.mean) << " +- " << report::format_float(est.std_error)
         << "\n";
    text << "exact: " << report::format_float(exact) << "\n";

    if (with_error_terms) {
        const auto errs = mc::estimate_error_terms(model, cfg, common.workers);
        json ej = json::array();
        double estimated_correction = 0.0;
        text << "error terms:\n";
        for (const auto& e : errs) {
            ej.push_back(json{{"sequence", e.sequence},
                              {"probability", e.probability},
                              {"std_error", e.std_error}});
            estimated_correction += e.probability;
            text << "  p_err[" << e.sequence << "] = " << report::format_float(e.probability) << " +- "
                 << report::format_float(e.std_error) << "\n";
        }
        rep.results["error_terms"] = std::move(ej);
        const double corrected_estimate = est.mean - estimated_correction;
        rep.results["corrected_chsh"] = json{{"estimate", corrected_estimate}};
        text << "corrected chsh estimate: " << report::format_float(corrected_estimate) << "\n";
        if (spec.name() == "chsh") {
            const double corrected_exact = corrected_chsh_value(model);
            rep.results["corrected_chsh"]["exact"] = corrected_exact;
            text << "corrected chsh exact: " << report::format_float(corrected_exact) << "\n";
        }
    }
    rep.timing_seconds = timer.seconds();
    emit(rep, common.output, out, text.str());
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"hidden-variable models, noncontextuality inequality bounds and quantum values"};
    app.set_version_flag("--version", std::string("ctxlab ") + kVersion);
    app.require_subcommand(1);

    CommonArgs common;
    std::string mode = "evolving";
    std::string scenario_name;
    std::string state = "recommended";
    std::string model_file;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    bool with_error_terms = false;

    auto add_common = [&](CLI::App* cmd, bool with_spec) {
        if (with_spec) {
            cmd->add_option("--inequality", common.inequality, "built-in inequality name");
            cmd->add_option("--file", common.file, "inequality JSON file");
        }
        cmd->add_option("--workers", common.workers, "worker threads (0 = library default)")
            ->envname("CTXLAB_WORKERS");
        cmd->add_option("--output", common.output, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* cat = app.add_subcommand("catalog", "list built-in inequalities");
    add_common(cat, false);

    auto* bounds = app.add_subcommand("bounds", "exhaustive classical / evolving-model bounds");
    add_common(bounds, true);
    bounds->add_option("--mode", mode, "static | evolving | certify");

    auto* quantum_cmd = app.add_subcommand("quantum", "quantum sequential-measurement value");
    add_common(quantum_cmd, true);
    quantum_cmd->add_option("--scenario", scenario_name, "built-in scenario (defaults to the base name)");
    quantum_cmd->add_option("--state", state, "recommended | random");
    quantum_cmd->add_option("--seed", seed, "seed for random states");

    auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo sampling of a model file");
    add_common(sim, true);
    sim->add_option("--model-file", model_file, "hidden-variable model JSON file");
    sim->add_option("--shots", shots, "runs per term");
    sim->add_option("--seed", seed, "stream seed");
    sim->add_flag("--with-error-terms", with_error_terms, "also estimate the BAB/CBC/DCD/ADA error terms");

    auto* check = app.add_subcommand("check", "run the full verification sweep");
    add_common(check, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (cat->parsed()) return cmd_catalog(common, out);
        if (bounds->parsed()) return cmd_bounds(common, mode, out);
        if (quantum_cmd->parsed()) return cmd_quantum(common, scenario_name, state, seed, out);
        if (sim->parsed()) return cmd_simulate(common, model_file, shots, seed, with_error_terms, out);
        if (check->parsed()) return acceptance::run_all(out) ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

} // namespace ctxlab::cli
