#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gnlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Reports go to the
/// --report path when given, otherwise to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnlab::cli
