#include "ctxlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "ctxlab/bounds.hpp"
#include "ctxlab/commands.hpp"
#include "ctxlab/inequality.hpp"
#include "ctxlab/io.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/report.hpp"
#include "ctxlab/sampling.hpp"

namespace ctxlab::acceptance {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt5 = 2.2360679774997896;

class Criterion {
  public:
    Criterion(std::ostream& out, int number, std::string title)
        : out_(out), number_(number), title_(std::move(title))
    {
    }

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok_ = false;
            out_ << "    FAILED: " << what << "\n";
        }
    }

    void note(const std::string& line) { out_ << "    " << line << "\n"; }

    bool finish()
    {
        out_ << (ok_ ? "[PASS]" : "[FAIL]") << " criterion " << number_ << ": " << title_ << "\n";
        return ok_;
    }

  private:
    std::ostream& out_;
    int number_;
    std::string title_;
    bool ok_ = true;
};

double elapsed(const std::chrono::steady_clock::time_point& t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Model alternation_model()
{
    std::vector<std::uint32_t> map(16);
    for (std::uint32_t i = 0; i < 16; ++i) map[i] = i;
    map[0] = 8;
    map[8] = 0;
    return Model::point_mass({"A", "B", "C", "D"}, 0, TransitionKernel::deterministic(std::move(map)));
}

// Independent oracle: full enumeration of state tuples with explicit kernel
// entry products, no vector propagation.
double kernel_prob(const Model& m, std::uint32_t i, std::uint32_t j)
{
    switch (m.kernel.kind) {
        case TransitionKernel::Kind::Identity: return i == j ? 1.0 : 0.0;
        case TransitionKernel::Kind::Deterministic: return m.kernel.map[i] == j ? 1.0 : 0.0;
        case TransitionKernel::Kind::Dense: return m.kernel.rows[i * m.dim() + j];
    }
    return 0.0;
}

double enumeration_expectation(const InequalitySpec& spec, const Model& m)
{
    const int L = spec.max_length();
    const std::uint32_t dim = static_cast<std::uint32_t>(m.dim());
    std::vector<std::uint32_t> tup(static_cast<std::size_t>(L), 0);
    double total = 0.0;
    while (true) {
        double prob = m.initial[tup[0]];
        for (int k = 1; k < L; ++k) prob *= kernel_prob(m, tup[static_cast<std::size_t>(k - 1)],
                                                        tup[static_cast<std::size_t>(k)]);
        if (prob != 0.0) {
            Evolution evo;
            for (std::uint32_t s : tup) evo.states.push_back(s);
            total += prob * evaluate_on_evolution(spec, evo);
        }
        int k = L - 1;
        for (; k >= 0; --k) {
            if (++tup[static_cast<std::size_t>(k)] < dim) break;
            tup[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return total;
}

bool criterion_bounds(std::ostream& out, double& yu_oh_static, double& yu_oh_star_evolving)
{
    Criterion c(out, 1, "exact classical and evolving-model bounds");
    struct Case {
        const char* name;
        bool evolving;
        long long expected;
    };
    const Case cases[] = {
        {"chsh", false, 2},     {"chsh", true, 4},      {"chsh_star", true, 2},
        {"pm", false, 4},       {"pm_star", true, 4},   {"kcbs", false, -3},
        {"kcbs_star", true, -4}, {"yu_oh", false, 16},  {"yu_oh_star", true, 68},
    };
    for (const auto& k : cases) {
        const auto& spec = catalog(k.name);
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = k.evolving ? engine::evolving_bound(spec) : engine::static_bound(spec);
        const double secs = elapsed(t0);
        const std::string what = std::string(k.evolving ? "evolving " : "static ") + k.name;
        c.note(what + " = " + report::format_value(r.value, r.integral) + "  (" +
               report::format_float(secs) + " s)");
        c.require(r.integral, what + " computed in exact integer arithmetic");
        c.require(r.value == static_cast<double>(k.expected),
                  what + " expected " + std::to_string(k.expected));
        c.require(secs < 60.0, what + " finished under 60 s");
        if (std::string(k.name) == "chsh" && k.evolving) {
            const bool witness_ok = !r.witnesses.empty() && r.witnesses.front().states ==
                                                                std::vector<std::uint32_t>{0, 8};
            c.require(witness_ok, "evolving chsh witness list starts with (lambda_0, lambda_8)");
        }
        if (std::string(k.name) == "yu_oh" && !k.evolving) yu_oh_static = r.value;
        if (std::string(k.name) == "yu_oh_star" && k.evolving) yu_oh_star_evolving = r.value;
    }
    return c.finish();
}

bool criterion_relative_violation(std::ostream& out, double yu_oh_static, double yu_oh_star_evolving)
{
    Criterion c(out, 2, "relative-violation arithmetic (1/12 and 1/51)");
    const auto& bundle = quantum::scenario("yu_oh");
    const double q = quantum::quantum_value(catalog("yu_oh"), bundle.scenario, bundle.recommended_state);
    const double q_star =
        quantum::quantum_value(catalog("yu_oh_star"), bundle.scenario, bundle.recommended_state);
    const double rel = q / yu_oh_static - 1.0;
    const double rel_star = q_star / yu_oh_star_evolving - 1.0;
    c.note("yu_oh: quantum " + report::format_float(q) + ", relative violation " + report::format_float(rel));
    c.note("yu_oh_star: quantum " + report::format_float(q_star) + ", relative violation " +
           report::format_float(rel_star));
    c.require(std::abs(rel - 1.0 / 12.0) <= 1e-12, "yu_oh relative violation equals 1/12 within 1e-12");
    c.require(std::abs(rel_star - 1.0 / 51.0) <= 1e-12,
              "yu_oh_star relative violation equals 1/51 within 1e-12");
    return c.finish();
}

bool criterion_quantum_values(std::ostream& out)
{
    Criterion c(out, 3, "quantum values on built-in scenarios (1e-9)");
    {
        const auto& b = quantum::scenario("chsh");
        const double v = quantum::quantum_value(catalog("chsh"), b.scenario, b.recommended_state);
        c.note("chsh on recommended state: " + report::format_float(v));
        c.require(std::abs(v - 2.0 * kSqrt2) <= 1e-9, "chsh value is 2*sqrt(2)");
    }
    {
        const auto& b = quantum::scenario("pm");
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto rng = mc::SplitMix64::substream(101, s);
            const auto rho = quantum::random_density_state(4, rng);
            const double v = quantum::quantum_value(catalog("pm_star"), b.scenario, rho);
            c.require(std::abs(v - 6.0) <= 1e-9, "pm_star value is 6 on random state " + std::to_string(s));
        }
        c.note("pm_star on 20 random states: 6.000000000000");
    }
    {
        const auto& b = quantum::scenario("kcbs");
        const double v = quantum::quantum_value(catalog("kcbs"), b.scenario, b.recommended_state);
        const double v_star = quantum::quantum_value(catalog("kcbs_star"), b.scenario, b.recommended_state);
        c.note("kcbs: " + report::format_float(v) + ", kcbs_star: " + report::format_float(v_star));
        c.require(std::abs(v - (5.0 - 4.0 * kSqrt5)) <= 1e-9, "kcbs value is 5-4*sqrt(5)");
        c.require(std::abs(v_star - (4.0 - 4.0 * kSqrt5)) <= 1e-9, "kcbs_star value is 4-4*sqrt(5)");
    }
    {
        const auto& b = quantum::scenario("yu_oh");
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto rng = mc::SplitMix64::substream(202, s);
            const auto rho = quantum::random_density_state(3, rng);
            const double v = quantum::quantum_value(catalog("yu_oh"), b.scenario, rho);
            const double v_star = quantum::quantum_value(catalog("yu_oh_star"), b.scenario, rho);
            c.require(std::abs(v - 52.0 / 3.0) <= 1e-9, "yu_oh value is 52/3 on random state");
            c.require(std::abs(v_star - 208.0 / 3.0) <= 1e-9, "yu_oh_star value is 208/3 on random state");
        }
        c.note("yu_oh / yu_oh_star state-independent on 5 random states");
    }
    return c.finish();
}

bool criterion_error_term_defeat(std::ostream& out)
{
    Criterion c(out, 4, "error-corrected CHSH defeated by the alternation model");
    const Model m = alternation_model();
    const double chi = model_expectation(catalog("chsh"), m);
    c.note("model_expectation(chsh) = " + report::format_float(chi));
    c.require(chi == 4.0, "alternation model reaches exactly 4");
    const char* outers = "BCDA";
    const char* inners = "ABCD";
    double err_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double e = error_term(m, std::string(1, outers[k]), std::string(1, inners[k]));
        err_sum += e;
        c.require(e == 0.0, std::string("p_err[") + outers[k] + inners[k] + outers[k] + "] is exactly 0");
    }
    const double corrected = corrected_chsh_value(m);
    c.note("corrected chsh value = " + report::format_float(corrected));
    c.require(corrected == 4.0 && err_sum == 0.0, "corrected value equals 4");
    c.require(corrected > 2.0, "corrected inequality is violated (4 > 2)");
    return c.finish();
}

bool criterion_oracle_equivalence(std::ostream& out)
{
    Criterion c(out, 5, "exact expectations match full enumeration on 100 random models");
    const std::vector<std::string> labels = {"A", "B", "C", "D"};
    const InequalitySpec mixed("mixed", labels,
                               {SequenceTerm{1.0, {"A", "B"}}, SequenceTerm{1.0, {"B", "C", "D"}},
                                SequenceTerm{-0.5, {"C"}}, SequenceTerm{0.25, {"D", "A"}}},
                               Direction::Maximize);
    const InequalitySpec* specs[] = {&catalog("chsh"), &catalog("chsh_star"), &mixed};
    double worst = 0.0;
    for (const auto* spec : specs) {
        const double bound = engine::evolving_bound(*spec).value;
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto rng = mc::SplitMix64::substream(303, i);
            const Model m = mc::random_model(labels, TransitionKernel::Kind::Dense, rng);
            const double exact = model_expectation(*spec, m);
            const double enumerated = enumeration_expectation(*spec, m);
            worst = std::max(worst, std::abs(exact - enumerated));
            c.require(std::abs(exact - enumerated) <= 1e-12,
                      spec->name() + ": propagation vs enumeration on model " + std::to_string(i));
            c.require(exact <= bound + 1e-9, spec->name() + ": expectation within the evolving bound");
        }
    }
    c.note("largest propagation/enumeration deviation: " + report::format_float(worst));
    return c.finish();
}

bool criterion_context_independence(std::ostream& out)
{
    Criterion c(out, 6, "context independence of error terms and final marginals");
    const std::vector<std::string> labels = {"A", "B", "C", "D"};
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto rng = mc::SplitMix64::substream(404, i);
        const auto kind =
            i % 2 == 0 ? TransitionKernel::Kind::Dense : TransitionKernel::Kind::Deterministic;
        const Model m = mc::random_model(labels, kind, rng);
        for (const auto& outer : labels) {
            const double ref = error_term(m, outer, labels.front());
            for (const auto& inner : labels)
                c.require(error_term(m, outer, inner) == ref,
                          "error_term(" + outer + ", *) independent of the inner label");
        }
        const double aaa = last_measurement_distribution(m, {"A", "A", "A"});
        const double aca = last_measurement_distribution(m, {"A", "C", "A"});
        c.require(aaa == aca, "final marginal identical for AAA and ACA");
    }
    c.note("50 random models checked (dense and deterministic kernels)");
    return c.finish();
}

bool criterion_monte_carlo(std::ostream& out)
{
    Criterion c(out, 7, "Monte Carlo convergence, reproducibility, worker independence");
    const std::uint64_t shots = 100000;
    for (const auto& name : catalog_names()) {
        const auto& spec = catalog(name);
        const auto kind = spec.n() <= 9 ? TransitionKernel::Kind::Dense : TransitionKernel::Kind::Deterministic;
        int hits = 0;
        for (std::uint64_t i = 0; i < 20; ++i) {
            auto rng = mc::SplitMix64::substream(505 + spec.n(), i);
            const Model m = mc::random_model(spec.labels(), kind, rng);
            const double exact = model_expectation(spec, m);
            const auto est = mc::estimate_inequality(spec, m, mc::RunConfig{shots, 606 + i});
            if (std::abs(est.mean - exact) <= 5.0 * est.std_error + 1e-12) ++hits;
        }
        c.note(name + ": " + std::to_string(hits) + "/20 models within 5 standard errors");
        c.require(hits == 20, name + ": all 20 estimates within 5 standard errors at 1e5 shots");
    }

    // identical command + seed => identical bytes (timing stripped)
    {
        const Model m = alternation_model();
        const std::string path = "/tmp/ctxlab_acceptance_model.json";
        {
            std::ofstream f(path);
            f << io::model_to_json(m).dump(2) << "\n";
        }
        const std::vector<std::string> argv = {"simulate",     "--inequality", "chsh",
                                               "--model-file", path,           "--shots",
                                               "1000",         "--seed",       "7",
                                               "--with-error-terms", "--output", "json"};
        std::ostringstream out1, out2, err;
        const int rc1 = cli::run(argv, out1, err);
        const int rc2 = cli::run(argv, out2, err);
        c.require(rc1 == 0 && rc2 == 0, "simulate subcommand succeeded twice");
        c.require(report::strip_timing(out1.str()) == report::strip_timing(out2.str()),
                  "identical seeds give byte-identical reports");
        c.note("report determinism verified on the alternation model");
    }

    // bound-engine results independent of the worker count
    for (const char* name : {"chsh", "kcbs_star", "pm_star", "yu_oh_star"}) {
        engine::SearchOptions one, four;
        one.threads = 1;
        four.threads = 4;
        const auto a = engine::evolving_bound(catalog(name), one);
        const auto b = engine::evolving_bound(catalog(name), four);
        const bool same = a.value == b.value && a.witnesses == b.witnesses &&
                          a.evaluated_count == b.evaluated_count;
        c.require(same, std::string(name) + ": witnesses identical for 1 and 4 workers");
    }
    c.note("worker-count independence verified on four inequalities");
    return c.finish();
}

bool criterion_quantum_invariants(std::ostream& out)
{
    Criterion c(out, 8, "Lueders branch probabilities, commuting products, PM contexts");
    // branch probabilities sum to 1, including non-commuting sequences
    {
        const auto& chsh = quantum::scenario("chsh");
        const auto& kcbs = quantum::scenario("kcbs");
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto rng = mc::SplitMix64::substream(707, s);
            const auto rho4 = quantum::random_density_state(4, rng);
            const auto rho3 = quantum::random_density_state(3, rng);
            const std::vector<std::vector<std::string>> seqs4 = {{"A", "C"}, {"A", "B"}, {"B", "D", "A"}};
            for (const auto& seq : seqs4) {
                std::vector<quantum::QuantumObservable> obs;
                for (const auto& l : seq) obs.push_back(chsh.scenario.at(l));
                double sum = 0.0;
                for (const auto& b : quantum::sequential_branches(rho4, obs)) sum += b.probability;
                c.require(std::abs(sum - 1.0) <= 1e-10, "branch probabilities sum to 1 (chsh scenario)");
            }
            std::vector<quantum::QuantumObservable> nc = {kcbs.scenario.at("A"), kcbs.scenario.at("C")};
            double sum = 0.0;
            for (const auto& b : quantum::sequential_branches(rho3, nc)) sum += b.probability;
            c.require(std::abs(sum - 1.0) <= 1e-10, "branch probabilities sum to 1 (kcbs scenario)");
        }
        c.note("branch probability sums verified on 5 random states per scenario");
    }
    // commuting sequences equal tr(rho * prod O_k); PM contexts give +-1
    {
        const auto& pm = quantum::scenario("pm");
        const std::vector<std::vector<std::string>> contexts = {
            {"A", "B", "C"}, {"a", "b", "c"}, {"alpha", "beta", "gamma"},
            {"A", "a", "alpha"}, {"B", "b", "beta"}, {"c", "gamma", "C"}};
        const std::vector<double> products = {1, 1, 1, 1, 1, -1};
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto rng = mc::SplitMix64::substream(808, s);
            const auto rho = quantum::random_density_state(4, rng);
            for (std::size_t k = 0; k < contexts.size(); ++k) {
                std::vector<quantum::QuantumObservable> obs;
                quantum::Matrix prod = quantum::Matrix::Identity(4, 4);
                for (const auto& l : contexts[k]) {
                    obs.push_back(pm.scenario.at(l));
                    prod = prod * pm.scenario.at(l).matrix;
                }
                const double seq_val = quantum::sequential_correlation(rho, obs);
                const double trace_val = (rho.rho * prod).trace().real();
                c.require(std::abs(seq_val - trace_val) <= 1e-10,
                          "sequential correlation equals tr(rho * prod) for a commuting context");
                c.require(std::abs(seq_val - products[k]) <= 1e-10,
                          "PM context product is " + std::to_string(static_cast<int>(products[k])));
            }
        }
        c.note("PM rows +1, columns +1/+1, sequential <c gamma C> = -1 on 20 random states");
    }
    return c.finish();
}

} // namespace

bool run_all(std::ostream& out)
{
    out << "ctxlab verification sweep\n";
    bool ok = true;
    double yu_oh_static = 0.0, yu_oh_star_evolving = 0.0;
    ok &= criterion_bounds(out, yu_oh_static, yu_oh_star_evolving);
    ok &= criterion_relative_violation(out, yu_oh_static, yu_oh_star_evolving);
    ok &= criterion_quantum_values(out);
    ok &= criterion_error_term_defeat(out);
    ok &= criterion_oracle_equivalence(out);
    ok &= criterion_context_independence(out);
    ok &= criterion_monte_carlo(out);
    ok &= criterion_quantum_invariants(out);
    out << (ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << "\n";
    return ok;
}

} // namespace ctxlab::acceptance
