#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xgbias::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

// Runs one command (arguments without the program name). Results go to
// files; `out` gets short human-readable summaries and `err` gets one JSON
// error record on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xgbias::cli
