#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace valcalc {

enum ExitCode { kExitOk = 0, kExitInvalid = 2, kExitNonConvergence = 3 };

/// Runs `valcalc` with args (without the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valcalc
