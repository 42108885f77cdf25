#pragma once

// Batch command line front end. Exit codes:
//   0 success, 1 certification failure or state corruption, 2 invalid configuration,
//   3 step failure (partial outputs written), 4 snapshots missing for verification.

namespace plateslip::cli {

enum ExitCode : int {
  kOk = 0,
  kCertificationFailed = 1,
  kConfigError = 2,
  kStepFailure = 3,
  kMissingSnapshots = 4,
};

int run_cli(int argc, const char* const* argv);

}  // namespace plateslip::cli
