#pragma once

#include <string>
#include <vector>

namespace treepark::cli {

/// Parses argv (without the program name) and dispatches the subcommand.
/// Exit codes: 0 success, 1 out-of-band acceptance, 2 config/usage errors.
int run(const std::vector<std::string>& args);

}  // namespace treepark::cli
