#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace measinv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotApplicable = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitParse = 65;

/// Runs one invocation; args excludes the program name. Results go to files
/// under --out, summaries to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace measinv
