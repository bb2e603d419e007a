#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace archetypal::cli {

/// Runs the command-line tool in-process.
/// argv follows main() conventions minus the program name.
/// Exit codes: 0 ok, 1 failed verify suite, 2 usage / input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formats a double with 17 significant digits (round-trip safe).
std::string format_real(double v);

}  // namespace archetypal::cli
