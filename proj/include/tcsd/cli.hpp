#pragma once

#include <string>
#include <vector>

namespace tcsd {

// Exit codes: 0 success, 1 unknown subcommand / bad flags, 2 validation
// error, 3 fit non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoConvergence = 3;

int dispatch(const std::vector<std::string>& args);

}  // namespace tcsd
