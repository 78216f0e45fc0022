#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace xgbias::goals {

// Exact distribution of the number of goals from independent shots.
struct GoalDistribution {
  std::vector<double> pmf;  // pmf[k] = P(k goals), k = 0..n_shots
  std::size_t n_shots = 0;
  double total_xg = 0.0;

  double mean() const;
  double variance() const;
};

// Folds one Bernoulli(p) shot at a time into the PMF:
// pmf'[k] = pmf[k] (1 - p) + pmf[k-1] p. O(N^2), no cancellation.
// Throws DataError naming the first xG outside [0,1].
GoalDistribution poisson_binomial(std::span<const double> xgs);

struct TailProbabilities {
  double p_at_most = 0.0;   // P(goals <= observed)
  double p_at_least = 0.0;  // P(goals >= observed)
};

// Both tails include the observed count. Throws DataError when `observed`
// exceeds the number of shots.
TailProbabilities tail_probabilities(const GoalDistribution& dist, std::size_t observed);

}  // namespace xgbias::goals
