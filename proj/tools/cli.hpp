#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellforge::cli {

enum ExitCode : int {
  kOk = 0,
  kFail = 1,          // certify: not a facet; derive-verify: a solution failed
  kBadInput = 2,      // malformed arguments or input files
  kNumerical = 3,     // non-convergence or no violation
};

/// Runs one command line (without the program name). Primary output goes to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellforge::cli
