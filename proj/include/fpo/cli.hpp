#pragma once

namespace fpo {

/// Entry point behind the command-line tool; exposed for testing.
/// Exit codes: 0 success, 1 solver or verification failure, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace fpo
