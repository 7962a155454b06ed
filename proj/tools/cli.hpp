#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torus::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kInputError = 2,
    kContractViolation = 3,
    kInconclusive = 4,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; nothing touches the process streams directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torus::cli
