#pragma once

#include <string>
#include <vector>

namespace pdab {

// Runs the command-line tool on argv-style arguments (program name excluded).
// Exit codes: 0/1/2 = bisimilar / not bisimilar / unknown for the verdict
// commands (and success for the rest), 64 usage error, 65 malformed input,
// 70 exhausted resource budget.
int run_cli(const std::vector<std::string>& args);

}  // namespace pdab
