#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pco {

/// Process exit codes of the `pco` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInvariant = 3,
  kExitVerifyFailed = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pco
