#include "ctxlab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

namespace ctxlab {

std::string to_string(Direction d)
{
    return d == Direction::Maximize ? "maximize" : "minimize";
}

Direction direction_from_string(const std::string& s)
{
    if (s == "maximize") return Direction::Maximize;
    if (s == "minimize") return Direction::Minimize;
    throw std::invalid_argument("direction must be 'maximize' or 'minimize', got '" + s + "'");
}

InequalitySpec::InequalitySpec(std::string name, std::vector<std::string> labels, std::vector<SequenceTerm> terms,
                               Direction direction, std::optional<double> classical_bound,
                               std::optional<double> quantum_bound)
    : name_(std::move(name)), labels_(std::move(labels)), terms_(std::move(terms)), direction_(direction),
      classical_bound_(classical_bound), quantum_bound_(quantum_bound)
{
    check_observable_count(static_cast<int>(labels_.size()));
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw std::invalid_argument("inequality labels must be unique");
    if (terms_.empty()) throw std::invalid_argument("inequality needs at least one term");

    integral_ = true;
    term_label_idx_.reserve(terms_.size());
    for (const auto& term : terms_) {
        if (term.sequence.empty()) throw std::invalid_argument("term sequences must be non-empty");
        max_length_ = std::max(max_length_, static_cast<int>(term.sequence.size()));
        if (term.coefficient != std::nearbyint(term.coefficient)) integral_ = false;
        std::vector<int> idx;
        idx.reserve(term.sequence.size());
        for (const auto& lab : term.sequence) idx.push_back(label_index(lab));
        term_label_idx_.push_back(std::move(idx));
    }
}

int InequalitySpec::label_index(const std::string& label) const
{
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw std::domain_error("unknown observable label '" + label + "' in inequality '" + name_ + "'");
    return static_cast<int>(it - labels_.begin());
}

double evaluate_on_evolution(const InequalitySpec& spec, const Evolution& evo)
{
    if (static_cast<int>(evo.states.size()) != spec.max_length())
        throw std::domain_error("evolution has " + std::to_string(evo.states.size()) + " states, expected " +
                                std::to_string(spec.max_length()));
    const int n = spec.n();
    const std::uint32_t limit = std::uint32_t{1} << n;
    for (std::uint32_t s : evo.states)
        if (s >= limit) throw std::domain_error("evolution state index out of range");

    double total = 0.0;
    const auto& terms = spec.terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        double prod = terms[t].coefficient;
        for (std::size_t k = 0; k < terms[t].sequence.size(); ++k) {
            const int shift = n - 1 - spec.term_label_index(t, k);
            if ((evo.states[k] >> shift) & 1u) prod = -prod;
        }
        total += prod;
    }
    return total;
}

double model_expectation(const InequalitySpec& spec, const Model& m)
{
    for (const auto& lab : spec.labels()) m.label_index(lab);
    double total = 0.0;
    for (const auto& term : spec.terms()) total += term.coefficient * sequence_expectation(m, term.sequence);
    return total;
}

double corrected_chsh_value(const Model& m)
{
    const double chi = model_expectation(catalog("chsh"), m);
    return chi - error_term(m, "B", "A") - error_term(m, "C", "B") - error_term(m, "D", "C") -
           error_term(m, "A", "D");
}

namespace {

SequenceTerm term(double coeff, std::initializer_list<const char*> seq)
{
    SequenceTerm t;
    t.coefficient = coeff;
    for (const char* s : seq) t.sequence.emplace_back(s);
    return t;
}

InequalitySpec make_chsh()
{
    return InequalitySpec("chsh", {"A", "B", "C", "D"},
                          {term(1, {"A", "B"}), term(1, {"B", "C"}), term(1, {"C", "D"}), term(-1, {"D", "A"})},
                          Direction::Maximize, 2.0, 2.0 * std::sqrt(2.0));
}

InequalitySpec make_chsh_star()
{
    return InequalitySpec("chsh_star", {"A", "B", "C", "D"},
                          {term(1, {"A", "B"}), term(1, {"C", "B"}), term(1, {"C", "D"}), term(-1, {"A", "D"})},
                          Direction::Maximize, 2.0, 2.0 * std::sqrt(2.0));
}

const std::vector<std::string> kPmLabels = {"A", "B", "C", "a", "b", "c", "alpha", "beta", "gamma"};

InequalitySpec make_pm()
{
    return InequalitySpec("pm", kPmLabels,
                          {term(1, {"A", "B", "C"}), term(1, {"a", "b", "c"}), term(1, {"alpha", "beta", "gamma"}),
                           term(1, {"A", "a", "alpha"}), term(1, {"B", "b", "beta"}),
                           term(-1, {"c", "gamma", "C"})},
                          Direction::Maximize, 4.0, 6.0);
}

InequalitySpec make_pm_star()
{
    return InequalitySpec("pm_star", kPmLabels,
                          {term(1, {"A", "B", "C"}), term(1, {"c", "a", "b"}), term(1, {"beta", "gamma", "alpha"}),
                           term(1, {"A", "a", "alpha"}), term(1, {"beta", "B", "b"}),
                           term(-1, {"c", "gamma", "C"})},
                          Direction::Maximize, 4.0, 6.0);
}

InequalitySpec make_kcbs()
{
    return InequalitySpec("kcbs", {"A", "B", "C", "D", "E"},
                          {term(1, {"A", "B"}), term(1, {"B", "C"}), term(1, {"C", "D"}), term(1, {"D", "E"}),
                           term(1, {"E", "A"})},
                          Direction::Minimize, -3.0, 5.0 - 4.0 * std::sqrt(5.0));
}

InequalitySpec make_kcbs_star()
{
    return InequalitySpec("kcbs_star", {"A", "B", "C", "D", "E"},
                          {term(1, {"A", "B"}), term(1, {"C", "B"}), term(1, {"C", "D"}), term(1, {"E", "D"}),
                           term(1, {"E", "A"}), term(-1, {"A", "A"})},
                          Direction::Minimize, -4.0, 4.0 - 4.0 * std::sqrt(5.0));
}

// 13-observable state-independent inequality in its optimal form. Single-
// observable weights and the two pair-coefficient classes as published.
struct YuOhCoefficients {
    std::vector<int> gamma1;                       // gamma1[i] for i in 1..13
    std::vector<std::pair<int, int>> pairs_m1;     // coefficient -1
    std::vector<std::pair<int, int>> pairs_m2;     // coefficient -2
};

const YuOhCoefficients& yu_oh_coefficients()
{
    static const YuOhCoefficients c = [] {
        YuOhCoefficients c;
        c.gamma1.assign(14, 0);
        for (int i : {4, 7, 10, 11, 12, 13}) c.gamma1[i] = 1;
        for (int i : {1, 5, 6, 8, 9}) c.gamma1[i] = 2;
        for (int i : {2, 3}) c.gamma1[i] = 3;
        c.pairs_m1 = {{1, 2}, {1, 3}, {1, 4},  {1, 7},  {4, 10}, {8, 10}, {9, 10}, {5, 11},
                      {7, 11}, {9, 11}, {6, 12}, {7, 12}, {8, 12}, {4, 13}, {5, 13}, {6, 13}};
        c.pairs_m2 = {{2, 3}, {2, 5}, {2, 8}, {3, 6}, {3, 9}, {5, 8}, {6, 9}};
        return c;
    }();
    return c;
}

std::string yo_label(int i) { return "A" + std::to_string(i); }

InequalitySpec make_yu_oh(bool starred)
{
    std::vector<std::string> labels;
    for (int i = 1; i <= 13; ++i) labels.push_back(yo_label(i));

    const auto& c = yu_oh_coefficients();
    std::vector<SequenceTerm> terms;
    for (int i = 1; i <= 13; ++i) {
        SequenceTerm t;
        t.coefficient = c.gamma1[i];
        t.sequence = {yo_label(i)};
        terms.push_back(std::move(t));
    }
    auto add_pairs = [&](const std::vector<std::pair<int, int>>& pairs, double coeff) {
        for (const auto& [i, j] : pairs) {
            SequenceTerm t;
            t.coefficient = coeff;
            t.sequence = {yo_label(i), yo_label(j)};
            terms.push_back(std::move(t));
        }
    };
    add_pairs(c.pairs_m1, -1.0);
    add_pairs(c.pairs_m2, -2.0);
    if (starred) {
        for (int i = 1; i <= 13; ++i) {
            SequenceTerm t;
            t.coefficient = 4.0;
            t.sequence = {yo_label(i), yo_label(i)};
            terms.push_back(std::move(t));
        }
    }
    const double quantum = starred ? 208.0 / 3.0 : 52.0 / 3.0;
    return InequalitySpec(starred ? "yu_oh_star" : "yu_oh", std::move(labels), std::move(terms),
                          Direction::Maximize, starred ? 68.0 : 16.0, quantum);
}

const std::map<std::string, InequalitySpec>& catalog_map()
{
    static const std::map<std::string, InequalitySpec> m = [] {
        std::map<std::string, InequalitySpec> m;
        auto put = [&](InequalitySpec s) { m.emplace(s.name(), std::move(s)); };
        put(make_chsh());
        put(make_chsh_star());
        put(make_pm());
        put(make_pm_star());
        put(make_kcbs());
        put(make_kcbs_star());
        put(make_yu_oh(false));
        put(make_yu_oh(true));
        return m;
    }();
    return m;
}

} // namespace

const InequalitySpec& catalog(const std::string& name)
{
    const auto& m = catalog_map();
    const auto it = m.find(name);
    if (it == m.end()) throw std::domain_error("unknown inequality '" + name + "'");
    return it->second;
}

const std::vector<std::string>& catalog_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : catalog_map()) v.push_back(k);
        return v;
    }();
    return names;
}

std::string spec_digest(const InequalitySpec& spec)
{
    std::ostringstream os;
    for (const auto& l : spec.labels()) os << l << ';';
    os << '|' << to_string(spec.direction()) << '|';
    for (const auto& t : spec.terms()) {
        os << t.coefficient << ':';
        for (const auto& l : t.sequence) os << l << ',';
        os << ';';
    }
    // FNV-1a 64-bit
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::string hex;
    for (int i = 15; i >= 0; --i) hex += "0123456789abcdef"[(h >> (4 * i)) & 0xf];
    return hex;
}

} // namespace ctxlab
