#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace urmflow::cli {

/// Runs the command line `args` (args[0] is the program name). When the
/// program is invoked as `urm` or `bacfg` the group is implied, otherwise the
/// first argument selects `urm`, `bacfg` or `demo`.
///
/// Exit codes: 0 success, 1 Unknown under --strict, 2 usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace urmflow::cli
