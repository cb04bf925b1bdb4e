#ifndef PACKING_CLI_HPP
#define PACKING_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace packing::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  /// The search stopped on its budget; partial results were still written.
  kBudget = 2,
  /// An internal consistency check failed.
  kInternal = 3,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread count used when --threads is absent: $PACKING_THREADS, else 1.
unsigned default_threads();

}  // namespace packing::cli

#endif  // PACKING_CLI_HPP
