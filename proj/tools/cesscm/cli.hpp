#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cesscm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

// Environment variable that makes --seed mandatory for randomized commands.
inline constexpr const char* kCiEnvVar = "CES_SCM_CI";

/// Runs the command line `args` (args[0] is the program name) writing primary
/// output to `out` and diagnostics/summaries to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cesscm::cli
