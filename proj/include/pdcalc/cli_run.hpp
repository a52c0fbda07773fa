#pragma once

// Reusable command-line driver: parses argv-style arguments, runs the
// requested computation, and returns the rendered report plus the process
// exit code (0 success, 2 configuration error, 1 internal error).  The
// binary's main() is a thin wrapper so tests can drive every command
// in-process.

#include <string>
#include <vector>

namespace pdcalc {

struct CliResult {
  int code = 0;
  std::string output;  // report text (or the error message on failure)
};

// args excludes the program name, e.g. {"scan", "--p", "3", "--m", "1"}.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace pdcalc
