#pragma once

#include <ostream>

namespace cimac {

// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitExplosion = 3,
  kExitMismatch = 4,
  kExitUnsupported = 5,
};

// Entry point of the `cimac` tool with its streams injected so tests can run
// commands in-process. Subcommands: solve, evaluate, compare, trace.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cimac
