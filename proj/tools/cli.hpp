#pragma once

#include <iosfwd>

namespace remoteop::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kConfigError = 2 };

/// Acceptance tolerance: REMOTEOP_TOL if set, otherwise 1e-9.
double acceptance_tolerance();

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace remoteop::cli
