#ifndef RRR_CLI_COMMANDS_HPP
#define RRR_CLI_COMMANDS_HPP

#include <iosfwd>

namespace rrr::cli {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitKinematic = 3 };

/// Entry point of the `rrr` tool. Tables go to `out`, diagnostics to `err`;
/// files are written only below the output directory.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rrr::cli

#endif // RRR_CLI_COMMANDS_HPP
