#include "ctxlab/quantum.hpp"

#include <cmath>
#include <numbers>

namespace ctxlab::quantum {

namespace {

using Complex = std::complex<double>;

Matrix identity(int d) { return Matrix::Identity(d, d); }

double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

QuantumObservable make_observable(std::string label, Matrix m)
{
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("observable matrix must be square");
    if (hermiticity_defect(m) > kMatrixTol)
        throw std::invalid_argument("observable '" + label + "' is not Hermitian within tolerance");
    const Matrix defect = m * m - identity(static_cast<int>(m.rows()));
    if (defect.cwiseAbs().maxCoeff() > kMatrixTol)
        throw std::invalid_argument("observable '" + label + "' is not involutory within tolerance");
    return QuantumObservable{std::move(label), std::move(m)};
}

const QuantumObservable& QuantumScenario::at(const std::string& label) const
{
    const auto it = observables.find(label);
    if (it == observables.end()) throw std::domain_error("scenario has no observable '" + label + "'");
    return it->second;
}

DensityState make_density_state(Matrix rho)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix must be square");
    if (hermiticity_defect(rho) > kMatrixTol)
        throw std::invalid_argument("density matrix is not Hermitian within tolerance");
    if (std::abs(rho.trace().real() - 1.0) > kMatrixTol || std::abs(rho.trace().imag()) > kMatrixTol)
        throw std::invalid_argument("density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kMatrixTol)
        throw std::invalid_argument("density matrix is not positive semidefinite within tolerance");
    return DensityState{std::move(rho)};
}

std::pair<Matrix, Matrix> projectors(const QuantumObservable& o)
{
    const Matrix id = identity(static_cast<int>(o.matrix.rows()));
    return {(id + o.matrix) / 2.0, (id - o.matrix) / 2.0};
}

std::vector<Branch> sequential_branches(const DensityState& rho, const std::vector<QuantumObservable>& seq)
{
    if (seq.empty() || seq.size() > 3) throw std::domain_error("sequence length must be in [1, 3]");
    const auto d = rho.rho.rows();
    for (const auto& o : seq)
        if (o.matrix.rows() != d)
            throw std::domain_error("observable '" + o.label + "' dimension does not match the state");

    std::vector<Branch> out;
    std::vector<int> outcomes;
    // Branch states are kept unnormalized; their trace is the joint probability,
    // so the Lueders renormalization never divides by a vanishing weight.
    auto recurse = [&](auto&& self, const Matrix& sigma, std::size_t k) -> void {
        if (k == seq.size()) {
            Branch b;
            b.outcomes = outcomes;
            b.probability = sigma.trace().real();
            out.push_back(std::move(b));
            return;
        }
        const auto [plus, minus] = projectors(seq[k]);
        for (int sign : {+1, -1}) {
            const Matrix& p = sign > 0 ? plus : minus;
            Matrix next = p * sigma * p;
            if (next.trace().real() < kBranchThreshold) continue;
            outcomes.push_back(sign);
            self(self, next, k + 1);
            outcomes.pop_back();
        }
    };
    recurse(recurse, rho.rho, 0);
    return out;
}

double sequential_correlation(const DensityState& rho, const std::vector<QuantumObservable>& seq)
{
    double value = 0.0;
    for (const auto& b : sequential_branches(rho, seq)) {
        int prod = 1;
        for (int s : b.outcomes) prod *= s;
        value += prod * b.probability;
    }
    return value;
}

double quantum_value(const InequalitySpec& spec, const QuantumScenario& scen, const DensityState& rho)
{
    double total = 0.0;
    for (const auto& term : spec.terms()) {
        std::vector<QuantumObservable> seq;
        seq.reserve(term.sequence.size());
        for (const auto& lab : term.sequence) seq.push_back(scen.at(lab));
        total += term.coefficient * sequential_correlation(rho, seq);
    }
    return total;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix pauli_x()
{
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y()
{
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z()
{
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix ray_observable_plus(const Eigen::Vector3d& v)
{
    // 2|v><v| - 1 for a unit vector v
    const Eigen::Matrix3d p = v * v.transpose();
    return (2.0 * p - Eigen::Matrix3d::Identity()).cast<Complex>();
}

Matrix ray_observable_minus(const Eigen::Vector3d& v)
{
    // 1 - 2|v><v| for a unit vector v
    const Eigen::Matrix3d p = v * v.transpose();
    return (Eigen::Matrix3d::Identity() - 2.0 * p).cast<Complex>();
}

ScenarioBundle make_chsh_scenario()
{
    const Matrix id = identity(2);
    const Matrix sx = pauli_x(), sz = pauli_z();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // A and C act on the first qubit, B and D on the second, so every context
    // appearing in chsh/chsh_star commutes. The recommended state is
    // |Phi+> = (|00> + |11>)/sqrt(2), which attains 2*sqrt(2).
    ScenarioBundle b;
    b.scenario.dimension = 4;
    auto put = [&](const std::string& lab, Matrix m) {
        b.scenario.observables.emplace(lab, make_observable(lab, std::move(m)));
    };
    put("A", kron(sz, id));
    put("B", kron(id, (sz + sx) * inv_sqrt2));
    put("C", kron(sx, id));
    put("D", kron(id, (sx - sz) * inv_sqrt2));

    Eigen::VectorXcd phi(4);
    phi << inv_sqrt2, 0, 0, inv_sqrt2;
    b.recommended_state = make_density_state(phi * phi.adjoint());
    return b;
}

ScenarioBundle make_pm_scenario()
{
    const Matrix id = identity(2);
    const Matrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();

    ScenarioBundle b;
    b.scenario.dimension = 4;
    auto put = [&](const std::string& lab, Matrix m) {
        b.scenario.observables.emplace(lab, make_observable(lab, std::move(m)));
    };
    put("A", kron(sz, id));
    put("B", kron(id, sz));
    put("C", kron(sz, sz));
    put("a", kron(id, sx));
    put("b", kron(sx, id));
    put("c", kron(sx, sx));
    put("alpha", kron(sz, sx));
    put("beta", kron(sx, sz));
    put("gamma", kron(sy, sy));

    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 1.0; // |00><00|; the value 6 is state-independent anyway
    b.recommended_state = make_density_state(std::move(rho));
    return b;
}

ScenarioBundle make_kcbs_scenario()
{
    // Pentagram directions: common polar angle with cos(theta) = 5^(-1/4) and
    // azimuths 4*pi*k/5, which makes cyclically adjacent rays orthogonal.
    // A_k = 2|l_k><l_k| - 1; the recommended state is the symmetry axis,
    // where the inequality value is exactly 5 - 4*sqrt(5).
    const double cos_t = std::pow(5.0, -0.25);
    const double sin_t = std::sqrt(1.0 - 1.0 / std::sqrt(5.0));

    ScenarioBundle b;
    b.scenario.dimension = 3;
    const std::array<std::string, 5> labels = {"A", "B", "C", "D", "E"};
    for (int k = 0; k < 5; ++k) {
        const double phi = 4.0 * std::numbers::pi * k / 5.0;
        const Eigen::Vector3d ray(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
        b.scenario.observables.emplace(labels[static_cast<std::size_t>(k)],
                                       make_observable(labels[static_cast<std::size_t>(k)],
                                                       ray_observable_plus(ray)));
    }

    Matrix rho = Matrix::Zero(3, 3);
    rho(2, 2) = 1.0;
    b.recommended_state = make_density_state(std::move(rho));
    return b;
}

ScenarioBundle make_yu_oh_scenario()
{
    // The 13 rays of the qutrit state-independent construction, indexed to
    // match the coefficient tables of the yu_oh catalog entries. A^i is the
    // reflection 1 - 2|v_i><v_i|.
    static const std::array<std::array<double, 3>, 13> rays = {{
        {0, 0, 1},   // A1
        {1, 0, 0},   // A2
        {0, 1, 0},   // A3
        {1, -1, 0},  // A4
        {0, 1, 1},   // A5
        {1, 0, 1},   // A6
        {1, 1, 0},   // A7
        {0, 1, -1},  // A8
        {1, 0, -1},  // A9
        {1, 1, 1},   // A10
        {1, -1, 1},  // A11
        {-1, 1, 1},  // A12
        {1, 1, -1},  // A13
    }};

    ScenarioBundle b;
    b.scenario.dimension = 3;
    for (int i = 0; i < 13; ++i) {
        Eigen::Vector3d v(rays[static_cast<std::size_t>(i)][0], rays[static_cast<std::size_t>(i)][1],
                          rays[static_cast<std::size_t>(i)][2]);
        v.normalize();
        const std::string lab = "A" + std::to_string(i + 1);
        b.scenario.observables.emplace(lab, make_observable(lab, ray_observable_minus(v)));
    }
    b.recommended_state = make_density_state(Matrix::Identity(3, 3) / 3.0);
    return b;
}

const std::map<std::string, ScenarioBundle>& scenario_map()
{
    static const std::map<std::string, ScenarioBundle> m = [] {
        std::map<std::string, ScenarioBundle> m;
        m.emplace("chsh", make_chsh_scenario());
        m.emplace("pm", make_pm_scenario());
        m.emplace("kcbs", make_kcbs_scenario());
        m.emplace("yu_oh", make_yu_oh_scenario());
        return m;
    }();
    return m;
}

} // namespace

const ScenarioBundle& scenario(const std::string& name)
{
    const auto& m = scenario_map();
    const auto it = m.find(name);
    if (it == m.end()) throw std::domain_error("unknown scenario '" + name + "'");
    return it->second;
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : scenario_map()) v.push_back(k);
        return v;
    }();
    return names;
}

DensityState random_density_state(int dimension, mc::SplitMix64& rng)
{
    Matrix m(dimension, dimension);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return make_density_state(std::move(rho));
}

} // namespace ctxlab::quantum
