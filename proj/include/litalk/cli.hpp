#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace litalk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitUndecoded = 2,
  kExitIo = 3,
};

/// Runs the litalk command line. `args` includes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace litalk::cli
