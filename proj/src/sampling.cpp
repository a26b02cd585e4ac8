#include "ctxlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ctxlab::mc {

namespace {

// Shots are processed in fixed-size blocks, each on its own substream, so the
// sampled streams and the merged tallies do not depend on thread scheduling.
constexpr std::uint64_t kBlockShots = 8192;
constexpr std::uint64_t kErrorTermStreamOffset = 64; // > max catalog term count

// Cumulative distribution with a binary-search draw.
struct Cdf {
    std::vector<double> cum;

    explicit Cdf(const std::vector<double>& p)
    {
        cum.resize(p.size());
        double run = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            run += p[i];
            cum[i] = run;
        }
    }

    std::uint32_t draw(SplitMix64& rng) const
    {
        const double u = rng.uniform01() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        return static_cast<std::uint32_t>(std::min<std::size_t>(it - cum.begin(), cum.size() - 1));
    }
};

// Precomputed sampling tables for one model.
class ModelSampler {
  public:
    explicit ModelSampler(const Model& m) : model_(m), initial_(m.initial)
    {
        if (m.kernel.kind == TransitionKernel::Kind::Dense) {
            const std::size_t d = m.dim();
            row_cdfs_.reserve(d);
            for (std::size_t i = 0; i < d; ++i)
                row_cdfs_.emplace_back(
                    std::vector<double>(m.kernel.rows.begin() + static_cast<std::ptrdiff_t>(i * d),
                                        m.kernel.rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)));
        }
    }

    std::uint32_t draw_initial(SplitMix64& rng) const { return initial_.draw(rng); }

    std::uint32_t step(std::uint32_t state, SplitMix64& rng) const
    {
        switch (model_.kernel.kind) {
            case TransitionKernel::Kind::Identity: return state;
            case TransitionKernel::Kind::Deterministic: return model_.kernel.map[state];
            case TransitionKernel::Kind::Dense: return row_cdfs_[state].draw(rng);
        }
        return state;
    }

  private:
    const Model& model_;
    Cdf initial_;
    std::vector<Cdf> row_cdfs_;
};

int value_shift(const Model& m, const std::string& label)
{
    return m.n - 1 - m.label_index(label);
}

int value_of(std::uint32_t state, int shift) { return (state >> shift) & 1u ? -1 : +1; }

// Sum of outcome products over `shots` runs of one sequence, split into
// per-block substreams. Products are +-1, so an exact integer tally carries
// the whole statistic (sum of squares equals the number of shots).
std::int64_t product_tally(const ModelSampler& sampler, const std::vector<int>& shifts, std::uint64_t shots,
                           std::uint64_t stream_seed, int threads)
{
    const auto blocks = static_cast<std::int64_t>((shots + kBlockShots - 1) / kBlockShots);
    std::int64_t total = 0;
#if defined(_OPENMP)
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(+ : total)
#else
    (void)threads;
#endif
    for (std::int64_t b = 0; b < blocks; ++b) {
        SplitMix64 rng = SplitMix64::substream(stream_seed, static_cast<std::uint64_t>(b));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockShots;
        const std::uint64_t hi = std::min(shots, lo + kBlockShots);
        std::int64_t block = 0;
        for (std::uint64_t s = lo; s < hi; ++s) {
            std::uint32_t state = sampler.draw_initial(rng);
            int prod = value_of(state, shifts.front());
            for (std::size_t k = 1; k < shifts.size(); ++k) {
                state = sampler.step(state, rng);
                prod *= value_of(state, shifts[k]);
            }
            block += prod;
        }
        total += block;
    }
    return total;
}

// Number of runs where the first and third outcome disagree (sequences XYX).
std::int64_t disagreement_tally(const ModelSampler& sampler, int outer_shift, std::uint64_t shots,
                                std::uint64_t stream_seed, int threads)
{
    const auto blocks = static_cast<std::int64_t>((shots + kBlockShots - 1) / kBlockShots);
    std::int64_t total = 0;
#if defined(_OPENMP)
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(+ : total)
#else
    (void)threads;
#endif
    for (std::int64_t b = 0; b < blocks; ++b) {
        SplitMix64 rng = SplitMix64::substream(stream_seed, static_cast<std::uint64_t>(b));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockShots;
        const std::uint64_t hi = std::min(shots, lo + kBlockShots);
        std::int64_t block = 0;
        for (std::uint64_t s = lo; s < hi; ++s) {
            std::uint32_t state = sampler.draw_initial(rng);
            const int first = value_of(state, outer_shift);
            state = sampler.step(state, rng); // after outer
            state = sampler.step(state, rng); // after inner
            if (value_of(state, outer_shift) != first) ++block;
        }
        total += block;
    }
    return total;
}

double tally_std_error(std::int64_t sum, std::uint64_t shots)
{
    if (shots < 2) return 0.0;
    const double mean = static_cast<double>(sum) / static_cast<double>(shots);
    const double nshots = static_cast<double>(shots);
    // products are +-1: sum of squares == shots
    const double var = std::max(0.0, (nshots - nshots * mean * mean) / (nshots - 1.0));
    return std::sqrt(var / nshots);
}

} // namespace

double SplitMix64::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<int> simulate_sequence(const Model& m, const std::vector<std::string>& seq, SplitMix64& rng)
{
    if (seq.empty()) throw std::domain_error("measurement sequence must be non-empty");
    std::vector<int> shifts;
    shifts.reserve(seq.size());
    for (const auto& lab : seq) shifts.push_back(value_shift(m, lab));

    const ModelSampler sampler(m);
    std::vector<int> out;
    out.reserve(seq.size());
    std::uint32_t state = sampler.draw_initial(rng);
    out.push_back(value_of(state, shifts.front()));
    for (std::size_t k = 1; k < shifts.size(); ++k) {
        state = sampler.step(state, rng);
        out.push_back(value_of(state, shifts[k]));
    }
    return out;
}

Estimate estimate_inequality(const InequalitySpec& spec, const Model& m, const RunConfig& cfg, int threads)
{
    if (cfg.shots < 1) throw std::invalid_argument("shots must be >= 1");
    for (const auto& lab : spec.labels()) m.label_index(lab);

    const ModelSampler sampler(m);
    Estimate est;
    est.shots = cfg.shots;
    double var_sum = 0.0;
    for (std::size_t t = 0; t < spec.terms().size(); ++t) {
        const auto& term = spec.terms()[t];
        std::vector<int> shifts;
        shifts.reserve(term.sequence.size());
        for (const auto& lab : term.sequence) shifts.push_back(value_shift(m, lab));

        const std::uint64_t term_seed = SplitMix64::substream_seed(cfg.seed, t);
        const std::int64_t sum = product_tally(sampler, shifts, cfg.shots, term_seed, threads);
        const double mean = static_cast<double>(sum) / static_cast<double>(cfg.shots);
        const double se = tally_std_error(sum, cfg.shots);
        est.per_term_means.push_back(mean);
        est.mean += term.coefficient * mean;
        var_sum += term.coefficient * term.coefficient * se * se;
    }
    est.std_error = std::sqrt(var_sum);
    return est;
}

namespace {

// Normalized positive draw whose entries sum to 1 up to one rounding step.
std::vector<double> random_distribution(std::size_t dim, SplitMix64& rng)
{
    std::vector<double> p(dim);
    double sum = 0.0;
    for (auto& x : p) {
        x = rng.uniform_open01();
        sum += x;
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        p[i] /= sum;
        partial += p[i];
    }
    p[dim - 1] = std::max(0.0, 1.0 - partial);
    return p;
}

} // namespace

Model random_model(const std::vector<std::string>& labels, TransitionKernel::Kind kind, SplitMix64& rng)
{
    check_observable_count(static_cast<int>(labels.size()));
    const std::size_t dim = std::size_t{1} << labels.size();
    auto initial = random_distribution(dim, rng);

    TransitionKernel kernel;
    switch (kind) {
        case TransitionKernel::Kind::Identity:
            kernel = TransitionKernel::identity();
            break;
        case TransitionKernel::Kind::Deterministic: {
            std::vector<std::uint32_t> map(dim);
            for (auto& t : map) t = static_cast<std::uint32_t>(rng.next() % dim);
            kernel = TransitionKernel::deterministic(std::move(map));
            break;
        }
        case TransitionKernel::Kind::Dense: {
            std::vector<double> rows;
            rows.reserve(dim * dim);
            for (std::size_t i = 0; i < dim; ++i) {
                const auto row = random_distribution(dim, rng);
                rows.insert(rows.end(), row.begin(), row.end());
            }
            kernel = TransitionKernel::dense(std::move(rows), dim);
            break;
        }
    }
    return Model(std::vector<std::string>(labels), std::move(initial), std::move(kernel));
}

std::array<ErrorTermEstimate, 4> estimate_error_terms(const Model& m, const RunConfig& cfg, int threads)
{
    if (cfg.shots < 1) throw std::invalid_argument("shots must be >= 1");
    static const std::array<std::pair<const char*, const char*>, 4> seqs = {
        {{"B", "A"}, {"C", "B"}, {"D", "C"}, {"A", "D"}}};

    const ModelSampler sampler(m);
    std::array<ErrorTermEstimate, 4> out;
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        const std::string outer = seqs[s].first;
        const std::string inner = seqs[s].second;
        m.label_index(inner);
        const std::uint64_t stream_seed =
            SplitMix64::substream_seed(cfg.seed, kErrorTermStreamOffset + s);
        const std::int64_t count =
            disagreement_tally(sampler, value_shift(m, outer), cfg.shots, stream_seed, threads);
        const double p = static_cast<double>(count) / static_cast<double>(cfg.shots);
        out[s].sequence = outer + inner + outer;
        out[s].probability = p;
        out[s].std_error = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(cfg.shots)));
    }
    return out;
}

} // namespace ctxlab::mc
