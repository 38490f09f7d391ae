#pragma once

#include <iosfwd>

namespace gridclear::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotOptimal = 2;
inline constexpr int kExitAuditFailed = 3;

/// Entry point of the gridclear tool, with injectable streams for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridclear::cli
