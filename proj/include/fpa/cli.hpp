#pragma once

#include <ostream>
#include <span>
#include <string>

namespace fpa::cli {

/// Parses `args` (without the program name) and runs the chosen subcommand:
/// run, experiment, replicate, compare or list-functions. Data goes to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on a runtime or validation
/// failure and 2 on a usage error.
int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace fpa::cli
