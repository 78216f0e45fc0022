#include <gtest/gtest.h>

#include <cmath>

#include "synthetic.hpp"
#include "xgbias/error.hpp"
#include "xgbias/shot_sampler/sampler.hpp"
#include "xgbias/shot_sampler/spatial_distribution.hpp"

namespace xgbias::sampler {
namespace {

const ShotDataset& dataset() {
  static const ShotDataset ds = [] {
    testing::SyntheticSpec spec;
    spec.n = 20000;
    spec.seed = 3;
    return testing::synthetic_dataset(xg::reference_model(), spec);
  }();
  return ds;
}

TEST(ScaleXg, ScalesAndClamps) {
  EXPECT_DOUBLE_EQ(scale_xg(0.3, 25), 0.375);
  EXPECT_DOUBLE_EQ(scale_xg(0.9, 25), 1.0);
  EXPECT_DOUBLE_EQ(scale_xg(0.3, -100), 0.0);
  EXPECT_DOUBLE_EQ(scale_xg(0.3, 0), 0.3);
  EXPECT_THROW(scale_xg(0.3, -100.5), ConfigError);
}

TEST(Distribution, ProbabilitiesFormADistribution) {
  const auto dist = build_distribution(dataset().shots);
  double total = 0;
  std::size_t count = 0;
  for (const auto& c : dist.cells()) {
    total += c.probability;
    count += c.count;
    EXPECT_NEAR(c.bodypart_mix[0] + c.bodypart_mix[1] + c.bodypart_mix[2], 1.0, 1e-12);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(count, dataset().shots.size());
  EXPECT_EQ(dist.source_n(), dataset().shots.size());
}

TEST(Distribution, SingleCellAndClamping) {
  ShotRecord s;
  s.start_x = 120.0;  // on the goal line: clamped into the last column
  s.start_y = 80.0;
  const std::vector<ShotRecord> shots(5, s);
  const auto dist = build_distribution(shots);
  ASSERT_EQ(dist.cells().size(), 1u);
  EXPECT_EQ(dist.cells()[0].cell, (GridCell{kGridColumns - 1, kGridRows - 1}));
  EXPECT_DOUBLE_EQ(dist.probability(dist.cells()[0].cell), 1.0);
  EXPECT_THROW(build_distribution(std::vector<ShotRecord>{}), DataError);
}

TEST(Sampler, LocationsDoNotDependOnAlpha) {
  const auto dist = build_distribution(dataset().shots);
  const auto model = xg::reference_model();
  const ShotSampler sampler(dist, model);
  Rng a(17), b(17);
  for (int i = 0; i < 1000; ++i) {
    const auto s0 = sampler.draw(a, 0.0);
    const auto s25 = sampler.draw(b, 25.0);
    ASSERT_EQ(s0.start_x, s25.start_x);
    ASSERT_EQ(s0.start_y, s25.start_y);
    ASSERT_EQ(s0.body_part, s25.body_part);
    ASSERT_EQ(s0.xg_raw, s25.xg_raw);
    ASSERT_LE(s0.outcome, s25.outcome);  // common uniforms: more skill never loses a goal
    ASSERT_GE(s0.start_x, 0.0);
    ASSERT_LE(s0.start_x, kProviderLength);
  }
}

TEST(Sampler, DrawsFollowTheSourceCells) {
  const auto dist = build_distribution(dataset().shots);
  const auto model = xg::reference_model();
  const auto batch = sample_shots(dist, model, 50000, 0.0, 4);
  std::map<GridCell, double> freq;
  for (const auto& s : batch.shots) freq[cell_of(s.start_x, s.start_y)] += 1.0 / 50000.0;
  for (const auto& [cell, f] : freq) ASSERT_GT(dist.probability(cell), 0.0);
  const auto& top = *std::max_element(dist.cells().begin(), dist.cells().end(),
                                      [](const auto& a, const auto& b) { return a.count < b.count; });
  const double p = top.probability;
  EXPECT_NEAR(freq[top.cell], p, 5 * std::sqrt(p * (1 - p) / 50000));
}

TEST(Repetitions, ResultsDoNotDependOnThreadCount) {
  const auto dist = build_distribution(dataset().shots);
  const auto model = xg::reference_model();
  const auto one = simulate_repetitions(dist, model, 10.0, 50, 2000, 99, 1);
  const auto four = simulate_repetitions(dist, model, 10.0, 50, 2000, 99, 4);
  EXPECT_EQ(one.mean_gax, four.mean_gax);
  EXPECT_EQ(one.std_gax, four.std_gax);
  EXPECT_EQ(one.p_overperform, four.p_overperform);
  EXPECT_EQ(one.clamp_events, four.clamp_events);
}

TEST(Repetitions, UnbiasedWithoutSkillAndMonotoneInAlpha) {
  const auto dist = build_distribution(dataset().shots);
  const auto model = xg::reference_model();
  const auto s0 = simulate_repetitions(dist, model, 0.0, 100, 4000, 5, 2);
  EXPECT_LE(std::abs(s0.mean_gax), 4 * s0.std_gax / std::sqrt(4000.0));
  EXPECT_NEAR(s0.se, std::sqrt(s0.p_overperform * (1 - s0.p_overperform) / 4000.0), 1e-15);
  double last = s0.mean_gax;
  for (double alpha : {5.0, 10.0, 25.0}) {
    const auto s = simulate_repetitions(dist, model, alpha, 100, 4000, 5, 2);
    EXPECT_GE(s.mean_gax, last);
    last = s.mean_gax;
  }
}

TEST(Repetitions, RejectsEmptyGrid) {
  const auto dist = build_distribution(dataset().shots);
  EXPECT_THROW(simulate_repetitions(dist, xg::reference_model(), 0, 0, 10, 1), ConfigError);
  EXPECT_THROW(simulate_repetitions(dist, xg::reference_model(), 0, 10, 0, 1), ConfigError);
}

// P(at least k of m) by enumerating all 2^m season outcomes.
double brute_tail(double p, int k, int m) {
  double total = 0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int wins = __builtin_popcount(mask);
    if (wins >= k) total += std::pow(p, wins) * std::pow(1 - p, m - wins);
  }
  return total;
}

TEST(Consistency, ExactBinomialTail) {
  EXPECT_NEAR(consistency_probability(0.5, 4, 5), 0.1875, 1e-15);
  for (double p : {0.0, 0.1, 0.37, 0.62, 1.0}) {
    for (int m : {1, 5, 9}) {
      for (int k = 0; k <= m; ++k) {
        ASSERT_NEAR(consistency_probability(p, k, m), brute_tail(p, k, m), 1e-13) << p << " " << k << " " << m;
      }
    }
  }
}

}  // namespace
}  // namespace xgbias::sampler
