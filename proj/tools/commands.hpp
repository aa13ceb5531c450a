#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idsq::cli {

enum ExitCode : int { kOk = 0, kInternalError = 1, kInvalidInput = 2 };

/// Runs the command line (args exclude the program name). Reports go to `out` unless --out
/// names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idsq::cli
