#pragma once

#include <iosfwd>

namespace mdiqkd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point for the `mdiqkd` executable: subcommands keyrate, sweep, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdiqkd
