#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace calib::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kSolverFailure = 3,
  kUnsupportedSize = 4,
};

// Runs one `calib` command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace calib::cli
