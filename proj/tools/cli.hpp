#pragma once

#include <string>
#include <vector>

namespace precip::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;  // replay produced different outputs
inline constexpr int kInputError = 2;
inline constexpr int kEstimatorError = 3;
inline constexpr int kConfigError = 4;

/// Runs one command line (argv[0] is the program name) and returns its exit code.
int run(const std::vector<std::string>& argv);

}  // namespace precip::cli
