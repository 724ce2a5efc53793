#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrgate::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Entry point for the nrgate tool; writes normal output to `out` and
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrgate::cli
