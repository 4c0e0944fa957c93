#pragma once

#include <iosfwd>

namespace mnp::cli {

enum ExitCode : int { ok = 0, check_failure = 1, usage_error = 2 };

/// Entry point of the `mnp` tool with injectable streams, so tests can run
/// subcommands in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mnp::cli
