#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modyn {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kParse = 2;
inline constexpr int kValidation = 3;
inline constexpr int kCapacity = 4;
inline constexpr int kTolerance = 5;
}  // namespace exit_code

// Runs one CLI invocation (arguments without the program name) against the
// given streams and returns the process exit code. The binary's main() is a
// thin wrapper around this, which keeps the command surface testable
// in-process.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modyn
