#pragma once

// Batch front end: one subcommand per module, JSON in and out, all
// randomness derived from --seed. Exit codes: 0 pass, 1 property failure,
// 2 usage or input error.

#include <iosfwd>

namespace nnorm::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. The report goes to --output or `out`; diagnostics go
/// to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nnorm::cli
