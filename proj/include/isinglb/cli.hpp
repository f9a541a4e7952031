#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "isinglb/ising.hpp"

namespace isinglb {

/// Exit codes of the isinglb command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   ///< a check failed, or an unexpected error
inline constexpr int kExitUsage = 2;     ///< bad arguments, malformed input, violated hypothesis
inline constexpr int kExitCapacity = 3;  ///< enumeration cap or search budget exceeded

/// Default limits, with both caps replaced by ISING_LB_MAX_P when it is set.
/// Throws ArgumentError when the variable is not a positive integer.
EnumerationLimits limits_from_environment();

/// Runs the command line; argv[0] is the program name. Results go to `out`,
/// diagnostics and wall times to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isinglb
