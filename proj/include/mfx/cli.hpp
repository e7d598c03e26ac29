#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mfx::cli {

enum ExitCode : int { kOk = 0, kStaticError = 1, kDiverged = 2, kAuditFailure = 3 };

/// Runs one `mfx` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfx::cli
