#pragma once

#include <iosfwd>

namespace autotune {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

// Entry point of the `autotune` tool: fit, var-fit, simulate, benchmark, diagnose.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace autotune
