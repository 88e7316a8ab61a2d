#pragma once

/// Front end of the `susyspin` executable. Kept in the library so tests can
/// drive every subcommand in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace susyspin::cli {

enum ExitCode : int { kSuccess = 0, kNumericFailure = 1, kUsageError = 2 };

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip text capped at 12 significant digits ('.' decimal,
/// no negative zero).
std::string format_number(double v);

}  // namespace susyspin::cli
