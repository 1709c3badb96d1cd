#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bergman::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchema = "bergman-indices/1";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // verify found a failing check, or an internal error
  kValidation = 2,  // bad arguments or inputs outside an operation's domain
  kInconclusive = 3
};

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bergman::cli
