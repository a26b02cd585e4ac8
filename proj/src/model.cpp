#include "ctxlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ctxlab {

TransitionKernel TransitionKernel::deterministic(std::vector<std::uint32_t> targets)
{
    TransitionKernel k;
    k.kind = Kind::Deterministic;
    k.map = std::move(targets);
    return k;
}

TransitionKernel TransitionKernel::dense(std::vector<double> row_major, std::size_t dim)
{
    if (row_major.size() != dim * dim)
        throw std::invalid_argument("dense kernel needs " + std::to_string(dim * dim) + " entries, got " +
                                    std::to_string(row_major.size()));
    TransitionKernel k;
    k.kind = Kind::Dense;
    k.rows = std::move(row_major);
    return k;
}

void TransitionKernel::validate(std::size_t dim) const
{
    switch (kind) {
        case Kind::Identity:
            break;
        case Kind::Deterministic:
            if (map.size() != dim)
                throw std::invalid_argument("deterministic kernel map has " + std::to_string(map.size()) +
                                            " entries, expected " + std::to_string(dim));
            for (std::size_t i = 0; i < map.size(); ++i)
                if (map[i] >= dim)
                    throw std::invalid_argument("deterministic kernel target " + std::to_string(map[i]) +
                                                " at state " + std::to_string(i) + " out of range");
            break;
        case Kind::Dense: {
            if (rows.size() != dim * dim)
                throw std::invalid_argument("dense kernel has " + std::to_string(rows.size()) +
                                            " entries, expected " + std::to_string(dim * dim));
            for (std::size_t i = 0; i < dim; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double p = rows[i * dim + j];
                    if (p < 0.0 || p > 1.0)
                        throw std::invalid_argument("kernel row " + std::to_string(i) + " entry " +
                                                    std::to_string(j) + " outside [0,1]");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > kStochasticTol)
                    throw std::invalid_argument("kernel row " + std::to_string(i) + " sums to " +
                                                std::to_string(sum) + ", expected 1 within 1e-12");
            }
            break;
        }
    }
}

void TransitionKernel::apply(const std::vector<double>& dist_in, std::vector<double>& dist_out) const
{
    const std::size_t dim = dist_in.size();
    dist_out.assign(dim, 0.0);
    switch (kind) {
        case Kind::Identity:
            dist_out = dist_in;
            break;
        case Kind::Deterministic:
            for (std::size_t i = 0; i < dim; ++i) dist_out[map[i]] += dist_in[i];
            break;
        case Kind::Dense:
            for (std::size_t i = 0; i < dim; ++i) {
                const double w = dist_in[i];
                if (w == 0.0) continue;
                const double* row = rows.data() + i * dim;
                for (std::size_t j = 0; j < dim; ++j) dist_out[j] += w * row[j];
            }
            break;
    }
}

Model::Model(std::vector<std::string> labels_, std::vector<double> initial_, TransitionKernel kernel_)
    : n(static_cast<int>(labels_.size())), labels(std::move(labels_)), initial(std::move(initial_)),
      kernel(std::move(kernel_))
{
    check_observable_count(n);
    std::unordered_set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw std::invalid_argument("observable labels must be unique");

    const std::size_t d = dim();
    if (initial.size() != d)
        throw std::invalid_argument("initial distribution has " + std::to_string(initial.size()) +
                                    " entries, expected " + std::to_string(d));
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (initial[i] < 0.0 || initial[i] > 1.0)
            throw std::invalid_argument("initial[" + std::to_string(i) + "] outside [0,1]");
        sum += initial[i];
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
        throw std::invalid_argument("initial distribution sums to " + std::to_string(sum) +
                                    ", expected 1 within 1e-12");
    kernel.validate(d);
}

int Model::label_index(const std::string& label) const
{
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw std::domain_error("unknown observable label '" + label + "'");
    return static_cast<int>(it - labels.begin());
}

Model Model::point_mass(std::vector<std::string> labels_, std::uint32_t index, TransitionKernel kernel_)
{
    check_observable_count(static_cast<int>(labels_.size()));
    const std::size_t d = std::size_t{1} << labels_.size();
    if (index >= d) throw std::domain_error("point-mass index out of range");
    std::vector<double> init(d, 0.0);
    init[index] = 1.0;
    return Model(std::move(labels_), std::move(init), std::move(kernel_));
}

namespace {

// Per-state signs of one observable, as +-1 doubles.
std::vector<double> value_signs(const Model& m, const std::string& label)
{
    const int pos = m.label_index(label);
    const int shift = m.n - 1 - pos;
    std::vector<double> s(m.dim());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (i >> shift) & 1u ? -1.0 : 1.0;
    return s;
}

} // namespace

double sequence_expectation(const Model& m, const std::vector<std::string>& seq)
{
    if (seq.empty()) throw std::domain_error("measurement sequence must be non-empty");
    const std::size_t d = m.dim();
    std::vector<double> w(d), next;
    {
        const auto s = value_signs(m, seq.front());
        for (std::size_t i = 0; i < d; ++i) w[i] = m.initial[i] * s[i];
    }
    for (std::size_t k = 1; k < seq.size(); ++k) {
        m.kernel.apply(w, next);
        const auto s = value_signs(m, seq[k]);
        for (std::size_t i = 0; i < d; ++i) next[i] *= s[i];
        w.swap(next);
    }
    double total = 0.0;
    for (double x : w) total += x;
    return total;
}

double error_term(const Model& m, const std::string& outer, const std::string& inner)
{
    const auto s = value_signs(m, outer);
    m.label_index(inner); // validate only; transitions are measurement-agnostic
    const std::size_t d = m.dim();

    // Split the initial mixture by the position-1 value of `outer`, evolve both
    // parts through the two transitions, and read off the disagreement mass.
    std::vector<double> plus(d, 0.0), minus(d, 0.0), tmp;
    for (std::size_t i = 0; i < d; ++i) (s[i] > 0 ? plus : minus)[i] = m.initial[i];
    for (int step = 0; step < 2; ++step) {
        m.kernel.apply(plus, tmp);
        plus.swap(tmp);
        m.kernel.apply(minus, tmp);
        minus.swap(tmp);
    }
    double p = 0.0;
    for (std::size_t k = 0; k < d; ++k) p += (s[k] > 0) ? minus[k] : plus[k];
    return p;
}

double last_measurement_distribution(const Model& m, const std::vector<std::string>& seq)
{
    if (seq.empty()) throw std::domain_error("measurement sequence must be non-empty");
    for (const auto& lab : seq) m.label_index(lab);
    std::vector<double> dist = m.initial, tmp;
    for (std::size_t k = 1; k < seq.size(); ++k) {
        m.kernel.apply(dist, tmp);
        dist.swap(tmp);
    }
    const auto s = value_signs(m, seq.back());
    double p = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (s[i] > 0) p += dist[i];
    return p;
}

} // namespace ctxlab
