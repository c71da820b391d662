#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idsq::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kExhausted = 3 };

/// Parses `args` (without the program name) and runs one subcommand.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idsq::cli
