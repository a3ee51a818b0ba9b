#pragma once

#include <iosfwd>

namespace rowreorder {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitDataFormat = 3,
  kExitGateRefused = 4,
};

/// Runs the `rowreorder` command line. Results go to `out`, diagnostics to `err`.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rowreorder
