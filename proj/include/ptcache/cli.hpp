#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptcache {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitInvalid = 2 };

/// Environment variable naming the directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "PTCACHE_OUTPUT_DIR";

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptcache
