#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace discrepancy::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on algorithmic failure and 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discrepancy::cli
