#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stablekit {

/// Command-line driver. args[0] is the program name. Writes JSON (or CSV for
/// plot-data) to `out` and diagnostics to `err`.
/// Returns 0 on success, 1 on usage errors, 2 on numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablekit
