#pragma once

namespace landair::cli {

/// Entry point shared by the binary and the tests.
/// Exit codes: 0 success, 1 domain error (no-fly, no path, infeasible data),
/// 2 usage or parse error.
int run(int argc, const char* const* argv);

}  // namespace landair::cli
