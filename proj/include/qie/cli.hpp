#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qie {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotDistinguished = 1;  // compare: same polynomial
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;  // parse or validation error
inline constexpr int kExitGuard = 4;

// Runs one command (args exclude the program name). Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qie
