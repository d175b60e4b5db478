#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmsctl {

enum ExitCode { kOk = 0, kValidation = 1, kNumeric = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmsctl
