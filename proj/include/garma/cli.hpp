#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace garma::cli {

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// Runs one command line. `args[0]` is the program name. Results go to
/// `out` (or the --output file), warnings and progress to `err`; `in` is
/// read when --input is "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace garma::cli
