#ifndef NFE_CLI_HPP
#define NFE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nfe::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kAssumptionViolation = 1,  // only with --strict
  kSingularSystem = 2,
  kInputError = 3,           // unreadable/malformed problem, bad flags
};

/// Runs the command line `args` (args[0] is the program name), writing
/// results to `out` unless --out is given, and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nfe::cli

#endif  // NFE_CLI_HPP
