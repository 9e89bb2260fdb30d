#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tracegen::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kValidation = 4 };

/// Runs `trace-gen` with argv (program name first). Data goes to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace tracegen::cli
