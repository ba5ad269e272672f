#pragma once

#include <iosfwd>

namespace edisc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kValidation = 3,
  kSizeGuard = 4,
};

// Entry point of the `edisc` tool. Subcommands: simulate, dm, calibrate,
// baseline, render, compare, pipeline. No output file is written unless the
// whole command succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edisc::cli
