#ifndef CTXLAB_ASSIGNMENT_HPP
#define CTXLAB_ASSIGNMENT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxlab {

// Hard cap on the number of observables. Covers every built-in scenario
// (the largest needs 13); larger requests are rejected instead of guessed at.
inline constexpr int kMaxObservables = 13;

class capacity_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void check_observable_count(int n)
{
    if (n < 1 || n > kMaxObservables)
        throw capacity_error("observable count " + std::to_string(n) + " outside supported range [1, " +
                             std::to_string(kMaxObservables) + "]");
}

// One deterministic hidden-variable state: a fixed +-1 value per observable,
// packed into an integer. Bit convention: value +1 <-> bit 0, value -1 <-> bit 1,
// and the FIRST observable (label position 0) is the MOST significant bit.
// So for n=4, index 2 = binary 0010 decodes to (+,+,-,+) and index 8 to (-,+,+,+).
struct Assignment {
    std::uint32_t index = 0;
    int n = 0;

    Assignment() = default;
    Assignment(std::uint32_t idx, int n_obs) : index(idx), n(n_obs)
    {
        check_observable_count(n);
        if (index >= (std::uint32_t{1} << n))
            throw std::domain_error("assignment index " + std::to_string(idx) + " out of range for n=" +
                                    std::to_string(n_obs));
    }

    // Value attributed to the observable at label position `pos` (0-based).
    int value(int pos) const
    {
        if (pos < 0 || pos >= n)
            throw std::domain_error("label position " + std::to_string(pos) + " out of range");
        return (index >> (n - 1 - pos)) & 1u ? -1 : +1;
    }

    // Human-readable sign pattern, first label leftmost, e.g. "-+++".
    std::string pattern() const
    {
        std::string s(static_cast<std::size_t>(n), '+');
        for (int k = 0; k < n; ++k)
            if (value(k) < 0) s[static_cast<std::size_t>(k)] = '-';
        return s;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Decode an index into the +-1 value vector, first label first.
inline std::vector<int> index_to_assignment(std::uint32_t index, int n)
{
    Assignment a(index, n);
    std::vector<int> vals(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = a.value(k);
    return vals;
}

// Inverse of index_to_assignment.
inline std::uint32_t encode_assignment(const std::vector<int>& values)
{
    const int n = static_cast<int>(values.size());
    check_observable_count(n);
    std::uint32_t idx = 0;
    for (int k = 0; k < n; ++k) {
        const int v = values[static_cast<std::size_t>(k)];
        if (v != 1 && v != -1) throw std::domain_error("assignment values must be +1 or -1");
        if (v < 0) idx |= std::uint32_t{1} << (n - 1 - k);
    }
    return idx;
}

} // namespace ctxlab

#endif
