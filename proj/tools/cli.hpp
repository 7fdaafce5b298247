#pragma once

#include <ostream>

namespace greedyicl {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace greedyicl
