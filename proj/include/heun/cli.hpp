#pragma once

#include <ostream>

namespace heun::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kNoSolution = 3,  ///< also: a verification check failed
  kNumericalFailure = 4,
};

/// Entry point of the heunx tool. Writes results to `out` and diagnostics to
/// `err`; returns one of the ExitCode values (1 is not used).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heun::cli
