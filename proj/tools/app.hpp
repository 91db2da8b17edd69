#pragma once

#include <ostream>

namespace factmod::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFinding = 2;
inline constexpr int kExitBudget = 3;

/// Parses argv and runs one subcommand. JSON summaries go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace factmod::cli
