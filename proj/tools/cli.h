#pragma once

#include <ostream>

namespace dunham::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kNumericFailure = 3,
    kVerificationFailure = 4,
};

/// Entry point of the `dunham` tool; argv[0] is the program name.
/// Subcommands: terms, verify-odd, spectrum, oracle, compare.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dunham::cli
