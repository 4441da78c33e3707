#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magicfreq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
};

/// Runs the magicfreq command line. `args` excludes the program name.
/// Output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses an angle in radians: a plain number, or "pi", "pi/2", "3*pi/4", "-pi/3".
double parse_angle(const std::string& text);

}  // namespace magicfreq::cli
