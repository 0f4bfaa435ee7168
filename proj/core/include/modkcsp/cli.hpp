#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modkcsp {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitNotFound = 1;  // implement: no witness within bounds
constexpr int kExitInputError = 2;
constexpr int kExitResourceError = 3;
constexpr int kExitContractError = 4;

/// Dispatch one invocation. args excludes the program name. Writes the JSON
/// run report to out and diagnostics to err; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modkcsp
