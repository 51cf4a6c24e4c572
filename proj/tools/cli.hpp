#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirac::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kNumericalError = 2,
    kNotConverged = 3,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirac::cli
