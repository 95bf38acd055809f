#pragma once

#include <string>
#include <vector>

namespace nld {

// Exit codes of the nld command.
enum ExitCode { exit_ok = 0, exit_verdict = 2, exit_numeric = 3, exit_config = 4 };

// Runs one nld invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace nld
