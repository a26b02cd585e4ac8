#ifndef CTXLAB_BOUNDS_HPP
#define CTXLAB_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ctxlab/inequality.hpp"

namespace ctxlab::engine {

// At most this many optimal evolutions are reported, lexicographically
// smallest encoded tuples first.
inline constexpr std::size_t kWitnessCap = 16;

// Longest supported measurement sequence for the evolving search.
inline constexpr int kMaxSequenceLength = 3;

struct SearchOptions {
    int threads = 0;            // 0: library default worker count
    bool use_reduction = true;  // enumerate only position supports
    bool use_factorized = false; // closed-form last-position maximum (integral, L=2 only)
};

struct BoundResult {
    double value = 0.0;
    bool integral = false;               // value computed in exact integer arithmetic
    std::vector<Evolution> witnesses;    // optimal evolutions, lex smallest first, capped
    std::uint64_t evaluated_count = 0;   // evolutions covered by the search domain
};

// Labels actually read at each sequence position (position k's support is the
// union of seq_k over all terms of length >= k+1), in spec label order.
std::vector<std::vector<std::string>> position_supports(const InequalitySpec& spec);

// Optimum of evaluate_on_evolution over constant evolutions (lambda_i,...,lambda_i).
BoundResult static_bound(const InequalitySpec& spec);

// Optimum over all evolutions of length max_length(). OpenMP-parallel; the
// result (value, witnesses, count) is identical for every worker count.
BoundResult evolving_bound(const InequalitySpec& spec, const SearchOptions& options = {});

// Single-threaded reference: plain nested enumeration of the full unreduced
// tuple space through evaluate_on_evolution. Kept for tests and benchmarks.
BoundResult evolving_bound_serial(const InequalitySpec& spec);

struct CertifyResult {
    bool robust = false; // evolving bound equals static bound
    BoundResult static_result;
    BoundResult evolving_result;
};

// Whether the inequality's evolving-model bound coincides with its static
// noncontextual bound (i.e., the inequality is disturbance-robust).
CertifyResult certify(const InequalitySpec& spec, const SearchOptions& options = {});

} // namespace ctxlab::engine

#endif
