#ifndef CTXLAB_ACCEPTANCE_HPP
#define CTXLAB_ACCEPTANCE_HPP

#include <ostream>

namespace ctxlab::acceptance {

// Runs the full verification sweep (exact bounds, quantum values, error-term
// demonstration, oracle equivalence, context independence, Monte Carlo
// convergence, quantum-side invariants) and prints one pass/fail line per
// criterion. Returns true when everything passed.
bool run_all(std::ostream& out);

} // namespace ctxlab::acceptance

#endif
