#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bdtree {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,        // parse, IO or argument error
  kExitDomain = 2,       // witness outside its family, or contradicts the exact value
  kExitConvergence = 3,  // eigensolver hit its iteration cap
};

// Runs the command line `args` (args[0] is the program name). The report goes
// to `out`, diagnostics to `err`; the return value is an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdtree
