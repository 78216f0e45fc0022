#include "xgbias/goal_dist/poisson_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xgbias/error.hpp"

namespace xgbias::goals {

double GoalDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) m += static_cast<double>(k) * pmf[k];
  return m;
}

double GoalDistribution::variance() const {
  const double mu = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double d = static_cast<double>(k) - mu;
    v += d * d * pmf[k];
  }
  return v;
}

GoalDistribution poisson_binomial(std::span<const double> xgs) {
  GoalDistribution dist;
  dist.n_shots = xgs.size();
  dist.pmf.assign(xgs.size() + 1, 0.0);
  dist.pmf[0] = 1.0;
  for (std::size_t i = 0; i < xgs.size(); ++i) {
    const double p = xgs[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError("xG at index " + std::to_string(i) + " is " + std::to_string(p) +
                      ", outside [0,1]");
    }
    dist.total_xg += p;
    // Walk downwards so pmf[k-1] is still the previous iteration's value.
    for (std::size_t k = i + 1; k > 0; --k) {
      dist.pmf[k] = dist.pmf[k] * (1.0 - p) + dist.pmf[k - 1] * p;
    }
    dist.pmf[0] *= 1.0 - p;
  }
  return dist;
}

TailProbabilities tail_probabilities(const GoalDistribution& dist, std::size_t observed) {
  if (observed > dist.n_shots) {
    throw DataError("observed goals " + std::to_string(observed) + " exceed " +
                    std::to_string(dist.n_shots) + " shots");
  }
  TailProbabilities t;
  for (std::size_t k = 0; k <= observed; ++k) t.p_at_most += dist.pmf[k];
  for (std::size_t k = observed; k < dist.pmf.size(); ++k) t.p_at_least += dist.pmf[k];
  // A tail covering the whole support is 1 by definition, not by summation.
  t.p_at_most = observed == dist.n_shots ? 1.0 : std::min(1.0, t.p_at_most);
  t.p_at_least = observed == 0 ? 1.0 : std::min(1.0, t.p_at_least);
  return t;
}

}  // namespace xgbias::goals
