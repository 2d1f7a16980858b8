#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace holo {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2 };

/// Runs `holoq` with the given arguments (args[0] is the program name).
/// Results go to --output when given, else to `out`; diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holo
