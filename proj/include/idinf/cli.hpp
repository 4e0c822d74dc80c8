#pragma once

#include <iosfwd>

namespace idinf {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitGeneration = 3,
    kExitVerifyFail = 4,
};

/// Entry point of the `idinf` tool with injectable streams, so tests can run
/// subcommands in-process. Errors are reported as {"error", "message"} JSON on `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace idinf
