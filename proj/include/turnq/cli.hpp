// Subcommand bodies for the turnq tool. Each returns a process exit status
// and writes human-readable output to `out` and diagnostics to `err`.

#ifndef TURNQ_CLI_HPP_
#define TURNQ_CLI_HPP_

#include <iosfwd>
#include <string>

namespace turnq {

enum ExitStatus : int {
  kExitOk = 0,
  kExitError = 1,           // I/O and other runtime failures
  kExitConfigError = 2,
  kExitNotConverged = 3,
  kExitBudgetExceeded = 4,
  kExitVerifyFailed = 5,    // includes table/config key mismatch
  kExitFormatError = 6,     // unreadable or corrupt qtable.bin
};

int cmd_train(const std::string& config_path, std::ostream& out,
              std::ostream& err);
int cmd_solve(const std::string& config_path, const std::string& qstar_path,
              std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config_path, const std::string& qtable_path,
               std::ostream& out, std::ostream& err);
// Dumps a table as CSV: state,mover,action,value,visits.
int cmd_export_csv(const std::string& config_path,
                   const std::string& qtable_path,
                   const std::string& csv_path, std::ostream& out,
                   std::ostream& err);

}  // namespace turnq

#endif  // TURNQ_CLI_HPP_
