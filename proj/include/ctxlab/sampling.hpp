#ifndef CTXLAB_SAMPLING_HPP
#define CTXLAB_SAMPLING_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxlab/inequality.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab::mc {

// SplitMix64: counter-based generator with the golden-gamma increment and
// the Stafford mix13 finalizer. Streams are identified by their 64-bit seed;
// substream k of seed s starts at mix64(s + (k+1) * gamma). Documented in the
// README so outcome streams are reproducible from (algorithm, seed) alone.
class SplitMix64 {
  public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    static std::uint64_t mix64(std::uint64_t z)
    {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index)
    {
        return mix64(seed + (index + 1) * kGamma);
    }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index)
    {
        return SplitMix64(substream_seed(seed, index));
    }

    std::uint64_t next()
    {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1), safe for logarithms.
    double uniform_open01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the paired draw is cached.
    double normal();

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

  private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct RunConfig {
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
    std::vector<double> per_term_means;
};

struct ErrorTermEstimate {
    std::string sequence; // e.g. "BAB"
    double probability = 0.0;
    double std_error = 0.0;
};

// Samples one run of `seq`: draw the initial state from the mixture, read the
// assignment's value, apply the kernel, repeat. Returns the +-1 outcomes.
std::vector<int> simulate_sequence(const Model& m, const std::vector<std::string>& seq, SplitMix64& rng);

// Monte Carlo estimate of the inequality value: `shots` independent runs per
// term (term t samples substream t of the seed), combined by
// coefficient-weighted root-sum-square of the per-term standard errors.
Estimate estimate_inequality(const InequalitySpec& spec, const Model& m, const RunConfig& cfg, int threads = 0);

// Empirical disagreement frequencies for the sequences BAB, CBC, DCD, ADA
// (substreams 64..67 of the seed, so they never collide with term streams).
std::array<ErrorTermEstimate, 4> estimate_error_terms(const Model& m, const RunConfig& cfg, int threads = 0);

// Random valid model for property sweeps: the initial distribution is a
// normalized uniform draw; dense kernel rows likewise, deterministic maps are
// uniform over states.
Model random_model(const std::vector<std::string>& labels, TransitionKernel::Kind kind, SplitMix64& rng);

} // namespace ctxlab::mc

#endif
