#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdm::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidation = 2,
  kDisconnected = 3,
  kOptimizerFailure = 4,
  kBadConfig = 5,
};

/// Runs one CLI invocation; args exclude the program name. Regular output
/// goes to out, one-line "E_<CODE>: message" errors to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tdm::cli
