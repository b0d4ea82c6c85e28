#pragma once

#include <string>
#include <vector>

namespace fundnet {

/// Full command-line entry point. Exit codes: 0 success, 1 internal error,
/// 2 usage, 3 I/O, 4 input validation.
int run_cli(int argc, const char* const* argv);

/// Test-friendly overload; args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace fundnet
