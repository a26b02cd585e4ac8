#ifndef CTXLAB_INEQUALITY_HPP
#define CTXLAB_INEQUALITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctxlab/assignment.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab {

enum class Direction { Maximize, Minimize };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

// One coefficient-weighted measurement sequence, e.g. +1 * (A, B).
struct SequenceTerm {
    double coefficient = 0.0;
    std::vector<std::string> sequence; // measured left to right, length >= 1

    friend bool operator==(const SequenceTerm&, const SequenceTerm&) = default;
};

// A tuple of hidden-variable assignments, one per sequence position.
struct Evolution {
    std::vector<std::uint32_t> states;

    friend auto operator<=>(const Evolution&, const Evolution&) = default;
};

// An inequality: a sum of sequence terms, an optimization direction, and
// reference bound metadata. Terms shorter than the longest one anchor at
// position 1 (a single measurement always occupies the first slot).
class InequalitySpec {
  public:
    InequalitySpec(std::string name, std::vector<std::string> labels, std::vector<SequenceTerm> terms,
                   Direction direction, std::optional<double> classical_bound = std::nullopt,
                   std::optional<double> quantum_bound = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<SequenceTerm>& terms() const { return terms_; }
    Direction direction() const { return direction_; }
    std::optional<double> classical_bound() const { return classical_bound_; }
    std::optional<double> quantum_bound() const { return quantum_bound_; }

    int n() const { return static_cast<int>(labels_.size()); }
    int max_length() const { return max_length_; }
    bool integral_coefficients() const { return integral_; }

    int label_index(const std::string& label) const;

    // Label position of term t at sequence slot k (precompiled).
    int term_label_index(std::size_t t, std::size_t k) const { return term_label_idx_[t][k]; }

  private:
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<SequenceTerm> terms_;
    Direction direction_;
    std::optional<double> classical_bound_;
    std::optional<double> quantum_bound_;
    int max_length_ = 0;
    bool integral_ = false;
    std::vector<std::vector<int>> term_label_idx_;
};

// Value of the inequality expression on one specific evolution (the K-value):
//   sum_t coeff_t * prod_{k<len_t} v(seq_{t,k} | evo.states[k]).
// The evolution must have exactly max_length() states.
double evaluate_on_evolution(const InequalitySpec& spec, const Evolution& evo);

// Exact model expectation: sum_t coeff_t * sequence_expectation(m, seq_t).
double model_expectation(const InequalitySpec& spec, const Model& m);

// Left-hand side of the error-corrected CHSH inequality:
//   <chi_CHSH> - p_err[BAB] - p_err[CBC] - p_err[DCD] - p_err[ADA].
double corrected_chsh_value(const Model& m);

// Built-in inequalities:
//   chsh, chsh_star, pm, pm_star, kcbs, kcbs_star, yu_oh, yu_oh_star.
const InequalitySpec& catalog(const std::string& name);
const std::vector<std::string>& catalog_names();

// Stable content digest of a spec (labels, terms, direction), hex string.
std::string spec_digest(const InequalitySpec& spec);

} // namespace ctxlab

#endif
