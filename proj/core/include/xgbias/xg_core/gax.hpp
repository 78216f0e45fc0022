#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xgbias::xg {

struct ScoredShot {
  double xg = 0.0;
  bool is_goal = false;
};

// Goals above expectation: sum of goals minus cumulative xG. Empty -> 0.
inline double compute_gax(std::span<const ScoredShot> shots) {
  double gax = 0.0;
  for (const auto& s : shots) gax += (s.is_goal ? 1.0 : 0.0) - s.xg;
  return gax;
}

inline double compute_gax(std::span<const double> xg, std::span<const std::uint8_t> goals) {
  double gax = 0.0;
  for (std::size_t i = 0; i < xg.size() && i < goals.size(); ++i) gax += (goals[i] ? 1.0 : 0.0) - xg[i];
  return gax;
}

}  // namespace xgbias::xg
