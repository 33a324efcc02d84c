#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fglaw::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // validation failure or module error
inline constexpr int kUsage = 2;    // bad arguments, missing file, malformed input

/// Runs one command. `args` excludes the program name. Results go to
/// `out`; diagnostics go to `err` as a single JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fglaw::cli
