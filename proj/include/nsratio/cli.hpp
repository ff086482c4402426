#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsratio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsratio::cli
