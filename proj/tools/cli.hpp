#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dfx::cli {

/// Runs the `dfx` command line. Returns the process exit status; usage
/// errors print the help text to `err` and return 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfx::cli
