#ifndef FWI_CLI_H_
#define FWI_CLI_H_

// Command-line front end: `sweep`, `oracle-check` and `ingest-check`.

#include <ostream>
#include <string>
#include <vector>

namespace fwi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDataError = 2,
  kExitCheckFailed = 3,
};

// Default directory for output files when --output is absent.
inline constexpr char kOutputDirEnv[] = "FWI_OUTPUT_DIR";

// `args` excludes the program name. Normal output goes to `out`, diagnostics
// to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fwi::cli

#endif  // FWI_CLI_H_
