#pragma once

#include <iosfwd>

namespace ttinherit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `ttinherit` tool: run | verify | generate | report.
/// Returns 0 on success, 1 on bound violations or run failures, 2 on usage or config errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ttinherit
