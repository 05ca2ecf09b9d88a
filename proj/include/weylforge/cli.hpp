#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weylforge {

// Run the command-line interface in-process.  args excludes the program
// name.  Returns the process exit code: 0 success, 1 input/usage error,
// 2 verification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace weylforge
