#pragma once

#include <ostream>

namespace stochmatch {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;

// Commands: gen, simulate, opt, ratio, reduce, hardness, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stochmatch
