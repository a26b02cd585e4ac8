#ifndef CTXLAB_QUANTUM_HPP
#define CTXLAB_QUANTUM_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctxlab/inequality.hpp"
#include "ctxlab/sampling.hpp"

namespace ctxlab::quantum {

using Matrix = Eigen::MatrixXcd;

inline constexpr double kMatrixTol = 1e-10;     // Hermiticity / involution / state checks
inline constexpr double kBranchThreshold = 1e-14; // zero-probability branch cutoff

// A +-1-valued observable: Hermitian and involutory (matrix^2 = identity),
// so its spectrum is {+1, -1}, possibly degenerate.
struct QuantumObservable {
    std::string label;
    Matrix matrix;
};

// Validates and constructs; throws std::invalid_argument on violation.
QuantumObservable make_observable(std::string label, Matrix m);

struct QuantumScenario {
    int dimension = 0;
    std::map<std::string, QuantumObservable> observables;

    const QuantumObservable& at(const std::string& label) const;
};

struct DensityState {
    Matrix rho;
};

// Validates Hermiticity, positive semidefiniteness and unit trace.
DensityState make_density_state(Matrix rho);

// Spectral split via the involutory closed form P_+- = (I +- M)/2.
std::pair<Matrix, Matrix> projectors(const QuantumObservable& o);

// One measurement branch of a sequence: outcome signs and joint probability.
struct Branch {
    std::vector<int> outcomes;
    double probability = 0.0;
};

// All branches of sequentially measuring `seq` (Lueders updates after each
// measurement). Branches below kBranchThreshold are pruned.
std::vector<Branch> sequential_branches(const DensityState& rho, const std::vector<QuantumObservable>& seq);

// Expectation of the product of outcomes over the branch distribution.
double sequential_correlation(const DensityState& rho, const std::vector<QuantumObservable>& seq);

// Sum of coefficient-weighted sequential correlations of the spec's terms,
// with labels resolved against the scenario.
double quantum_value(const InequalitySpec& spec, const QuantumScenario& scen, const DensityState& rho);

struct ScenarioBundle {
    QuantumScenario scenario;
    DensityState recommended_state;
};

// Built-in scenarios: chsh (two qubits), pm (Peres-Mermin square),
// kcbs (qutrit pentagram), yu_oh (qutrit, 13 rays).
const ScenarioBundle& scenario(const std::string& name);
const std::vector<std::string>& scenario_names();

// rho = M M^dagger / tr(M M^dagger) with independent standard complex
// Gaussian entries in M; full rank almost surely.
DensityState random_density_state(int dimension, mc::SplitMix64& rng);

} // namespace ctxlab::quantum

#endif
