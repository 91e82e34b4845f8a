#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fqgen {

inline constexpr const char* kVersion = "1.0.0";

// Command-line front end.  `args` are the program arguments without the
// program name, in natural order.  Results go to `out`, machine-readable
// error lines to `err`.  Exit status: 0 ok, 1 a requested check failed,
// 2 input error, 3 enumeration/sampling budget exceeded, 4 a Monte Carlo
// decision stayed indeterminate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fqgen
