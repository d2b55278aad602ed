#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divcut {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadFlags = 2,
  kExitIo = 3,
  kExitInfeasible = 4,
  kExitLimit = 5,
  kExitAxioms = 6,
};

/// Runs one command line (args excludes the program name). Data goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divcut
