#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mscd::cli {

inline constexpr int kSuccess = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mscd::cli
