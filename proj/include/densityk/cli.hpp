#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace densityk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitAlgorithmError = 2;

/// Runs the command line `args` (args[0] is the program name). Returns 0 on
/// success, 1 for usage, input or schema errors and 2 for algorithm errors.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace densityk::cli
