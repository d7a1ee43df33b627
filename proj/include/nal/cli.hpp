#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nal::cli {

enum ExitCode {
  kExitOk = 0,
  kExitMaxOuter = 2,
  kExitInput = 3,
  kExitNumerical = 4,
};

// Entry point of the `nal` tool. args excludes the program name. Results go
// to files or `out`; diagnostics and the final status line go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace nal::cli
