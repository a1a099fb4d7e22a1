#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncsched::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "NCSCHED_CONFIG";

/// Runs the command line in `args` (program name excluded). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncsched::cli
