#pragma once

#include <string>
#include <vector>

namespace negspec::cli {

enum ExitCode : int { exit_ok = 0, exit_verify_failed = 1, exit_usage = 2, exit_numerical = 3 };

int run(const std::vector<std::string>& args);

} // namespace negspec::cli
