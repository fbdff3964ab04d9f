#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace safctl {

inline constexpr const char* kToolVersion = "0.1.0";

// Full command-line entry point.  Returns the process exit code:
// 0 success, 1 model/runtime failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace safctl
