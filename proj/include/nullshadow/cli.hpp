#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nullshadow::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kToleranceExceeded = 3 };

/// Runs the command line `args` (args[0] is the program name). Output that
/// is not redirected with --out goes to `out`; diagnostics go to `err`.
/// Parallelism is taken from NULLSHADOW_THREADS and never changes results.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nullshadow::cli
