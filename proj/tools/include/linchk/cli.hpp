#pragma once

#include <ostream>

namespace linchk {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCeiling = 3;

/// Entry point of the linchk command; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linchk
