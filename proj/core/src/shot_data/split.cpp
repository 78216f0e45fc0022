#include "xgbias/shot_data/split.hpp"

#include <algorithm>
#include <cmath>

#include "xgbias/error.hpp"
#include "xgbias/rng.hpp"

namespace xgbias::data {
namespace {

// Fisher-Yates with the portable uniform draw, so partitions do not depend
// on the standard library's shuffle.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

}  // namespace

Split stratified_split(const ShotDataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0,1)");
  }
  std::vector<std::size_t> goals, misses;
  for (std::size_t i = 0; i < dataset.shots.size(); ++i) {
    (dataset.shots[i].is_goal ? goals : misses).push_back(i);
  }
  if (goals.empty() || misses.empty()) {
    throw DataError("stratified split needs both goals and misses");
  }
  const auto n = static_cast<double>(dataset.shots.size());
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * n));
  auto n_test_goals = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_test) * static_cast<double>(goals.size()) / n));
  n_test_goals = std::min(n_test_goals, goals.size());
  const std::size_t n_test_misses = std::min(n_test - n_test_goals, misses.size());

  Rng rng(stream_seed(seed, 0x5711));
  shuffle(goals, rng);
  shuffle(misses, rng);

  std::vector<std::size_t> test(goals.begin(), goals.begin() + n_test_goals);
  test.insert(test.end(), misses.begin(), misses.begin() + n_test_misses);
  std::vector<std::size_t> train(goals.begin() + n_test_goals, goals.end());
  train.insert(train.end(), misses.begin() + n_test_misses, misses.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {dataset.subset(train), dataset.subset(test)};
}

}  // namespace xgbias::data
