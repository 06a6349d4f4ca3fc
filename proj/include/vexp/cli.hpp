#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vexp {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of run_cli.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,      // unknown command or flag, bad flag value
  kExitInvalid = 3,    // configuration fails validation
  kExitIo = 4,         // unreadable or malformed input file
  kExitNumerical = 5,  // singular or non-finite computation
  kExitInternal = 1,
};

/// Runs one command; `args` excludes the program name. Failures print a
/// single JSON line {"error": kind, "message": ...} to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vexp
