#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framekit::cli {

/// Process exit codes.
enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kUsageError = 2,
  kInternalError = 3,
};

/// Environment variable overriding the default hypothesis tolerance.
inline constexpr const char* kToleranceEnv = "FRAMEKIT_TOL";

/// Runs one command line. `args` excludes the program name. Documents go to
/// `out` (or --out), summaries and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framekit::cli
