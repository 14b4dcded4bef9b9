#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace momentkit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;       // analysis verdict is negative
inline constexpr int kInputError = 2;     // bad flags, unreadable or invalid input
inline constexpr int kNumericalFailure = 3;

// Runs one subcommand; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace momentkit::cli
