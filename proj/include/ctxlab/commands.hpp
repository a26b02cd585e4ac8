#ifndef CTXLAB_COMMANDS_HPP
#define CTXLAB_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace ctxlab::cli {

inline constexpr const char* kVersion = "1.0.0";

// Parses and executes one invocation (arguments without the program name).
// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ctxlab::cli

#endif
