#pragma once

namespace yspec::cli {

// Exit codes:
//   0  success (and, for `limits`, the predicted convergence holds)
//   2  invalid input (bad flags, malformed potential, validation errors)
//   3  numerical failure (tracer stall, winding breakdown, stagnation)
//   4  a scientific assertion checked by the command does not hold
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitAssertFailed = 4;

// Entry point for the `yspec` tool: subcommands `skeleton`, `spectrum`,
// `limits`, `pseudospectra`.
int run(int argc, const char* const* argv);

}  // namespace yspec::cli
