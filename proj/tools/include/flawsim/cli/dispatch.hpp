#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flawsim::cli {

/// Exit codes: 0 success (certified), 1 negative verdict, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. `args` excludes the program name. Primary output
/// goes to `out` unless redirected by --out; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Tool version embedded in every manifest.
const char* version();

}  // namespace flawsim::cli
