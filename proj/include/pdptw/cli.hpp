#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdptw::cli {

enum ExitStatus : int {
  kOk = 0,
  kIoError = 1,
  kUsageError = 2,
  kNoFeasible = 3,
  kValidationFailed = 4,
};

/// Runs the command line (args excludes the program name). All output goes
/// to `out`/`err`; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdptw::cli
