#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace effad::cli {

enum ExitCode : int { kOk = 0, kUserError = 2, kInternalError = 3 };

/// Entry point of the `effad` tool. `args` excludes the program name.
/// Subcommands: eval, grad, trace, stats.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

/// Prints `e` and returns kUserError for user mistakes, kInternalError for
/// anything else.
int report(const std::exception& e, std::ostream& err);

}  // namespace effad::cli
