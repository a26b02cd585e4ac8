#ifndef CTXLAB_MODEL_HPP
#define CTXLAB_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ctxlab/assignment.hpp"

namespace ctxlab {

// Row-stochasticity / normalization tolerance on inputs. Inputs failing it
// are rejected, not renormalized.
inline constexpr double kStochasticTol = 1e-12;

// State transition applied after every measurement. The transition never
// depends on which observable was measured.
struct TransitionKernel {
    enum class Kind { Identity, Deterministic, Dense };

    Kind kind = Kind::Identity;
    std::vector<std::uint32_t> map; // Deterministic: target index per state
    std::vector<double> rows;       // Dense: row-major (2^n x 2^n) probabilities

    static TransitionKernel identity() { return TransitionKernel{}; }
    static TransitionKernel deterministic(std::vector<std::uint32_t> targets);
    static TransitionKernel dense(std::vector<double> row_major, std::size_t dim);

    // Validates invariants against the state-space size 2^n; throws std::invalid_argument.
    void validate(std::size_t dim) const;

    // dist_out[j] = sum_i dist_in[i] * P(i -> j).
    void apply(const std::vector<double>& dist_in, std::vector<double>& dist_out) const;
};

// The hidden-variable model: a convex mixture over the 2^n deterministic
// assignments plus one time-homogeneous transition kernel that fires after
// every measurement within a run.
struct Model {
    int n = 0;
    std::vector<std::string> labels;  // unique, |labels| = n, first label = MSB
    std::vector<double> initial;      // length 2^n, sums to 1 within kStochasticTol
    TransitionKernel kernel;

    Model() = default;
    Model(std::vector<std::string> labels_, std::vector<double> initial_, TransitionKernel kernel_);

    std::size_t dim() const { return std::size_t{1} << n; }

    // Position of a label; throws std::domain_error for unknown labels.
    int label_index(const std::string& label) const;

    // Value the assignment `index` attributes to `label`.
    int value(std::uint32_t index, const std::string& label) const
    {
        return Assignment(index, n).value(label_index(label));
    }

    // Point mass on a single assignment plus the given kernel.
    static Model point_mass(std::vector<std::string> labels_, std::uint32_t index, TransitionKernel kernel_);
};

// Exact expectation of the product of outcomes along `seq`:
//   sum over state tuples (i_1..i_L) of initial[i_1] * prod_k kernel[i_{k-1},i_k]
//                                                    * prod_k v(seq_k | lambda_{i_k}).
// Computed by forward vector propagation; no sampling.
double sequence_expectation(const Model& m, const std::vector<std::string>& seq);

// p_err[outer.inner.outer]: probability that the position-3 value of `outer`
// differs from its position-1 value under the three-position evolution
// initial -> kernel -> kernel. Independent of `inner` by construction (the
// kernel is measurement-agnostic); `inner` is still validated.
double error_term(const Model& m, const std::string& outer, const std::string& inner);

// Marginal probability that the FINAL measurement of `seq` yields +1.
double last_measurement_distribution(const Model& m, const std::vector<std::string>& seq);

} // namespace ctxlab

#endif
