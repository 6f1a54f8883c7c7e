#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relfid {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one CLI invocation. `args` excludes the program name. Results go to
/// `out` unless an --out path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relfid
