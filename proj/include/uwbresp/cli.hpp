#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uwbresp::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotDetected = 1;  // detect: no detection; sweep: ordering fails
inline constexpr int kExitUsage = 2;        // bad arguments, config or input files
inline constexpr int kExitSimulation = 3;

/// Runs the command line `args` (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uwbresp::cli
