#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sasaki {

/// Exit codes of run().
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalid = 2,     // parse or validation failure
  kExitObstructed = 3,  // screen / futaki found an obstruction
  kExitNumerical = 4,   // NonConvergence, CapacityExceeded, NonConvex
};

/// Runs one subcommand. args excludes the program name. The report goes to
/// out; a one-line summary goes to err unless --quiet is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sasaki
