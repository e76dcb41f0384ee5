#pragma once

#include <string>
#include <vector>

namespace sdx {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // captured standard output
};

/// Runs `command` through /bin/sh and captures its standard output.
/// Standard error passes through to the caller's stderr.
CommandResult run_command(const std::string& command);

/// Single-quotes `arg` for safe interpolation into a shell command line.
std::string shell_quote(const std::string& arg);

/// Builds a shell command from pre-quoted program name and arguments.
std::string shell_join(const std::vector<std::string>& argv);

}  // namespace sdx
