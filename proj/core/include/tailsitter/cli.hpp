#pragma once

#include <iosfwd>

namespace tailsitter {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

// `tailsitter` command line: sim, trim-sweep, bifurcation, list-scenarios.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tailsitter
