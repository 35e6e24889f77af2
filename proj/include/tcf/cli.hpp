#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcf::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kConvergenceError = 3,
};

/// Entry point behind the `tcf` executable; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcf::cli
