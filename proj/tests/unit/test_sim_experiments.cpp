#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "synthetic.hpp"
#include "xgbias/error.hpp"
#include "xgbias/shot_sampler/sampler.hpp"
#include "xgbias/sim/experiments.hpp"

namespace xgbias::sim {
namespace {

ShotDataset population() {
  testing::SyntheticSpec spec;
  spec.n = 20000;
  spec.seed = 3;
  return testing::synthetic_dataset(xg::reference_model(), spec);
}

TEST(H1, GridOrderAndMonotoneInSkill) {
  const auto ds = population();
  const auto dist = sampler::build_distribution(ds.shots);
  const auto model = xg::reference_model();
  const auto result = run_h1(model, dist, {0.0, 25.0}, {20, 80}, 2000, 11);
  ASSERT_EQ(result.cells.size(), 4u);
  EXPECT_EQ(result.cells[1].alpha, 0.0);
  EXPECT_EQ(result.cells[1].n, 80u);
  EXPECT_EQ(result.cells[2].alpha, 25.0);
  EXPECT_GT(result.at(25.0, 80).summary.p_overperform, result.at(0.0, 80).summary.p_overperform);
  EXPECT_GT(result.at(25.0, 80).summary.mean_gax, result.at(25.0, 20).summary.mean_gax);
  EXPECT_NEAR(result.at(0.0, 80).summary.mean_gax, 0.0, 0.2);
  // Each cell is the same computation as a single repetition sweep.
  const auto direct = sampler::simulate_repetitions(dist, model, 25.0, 20, 2000, 11);
  EXPECT_EQ(direct.mean_gax, result.at(25.0, 20).summary.mean_gax);
  EXPECT_THROW(result.at(5.0, 20), ConfigError);
}

TEST(Profiles, GlobalLocationsGiveZeroDelta) {
  const auto ds = population();
  const auto dist = sampler::build_distribution(ds.shots);
  std::map<Id, std::vector<ShotRecord>> players;
  players[1] = ds.shots;  // identical spatial profile
  std::vector<ShotRecord> close;
  for (int i = 0; i < 50; ++i) {
    ShotRecord s;
    s.start_x = 116.6;  // about 3 m out, central
    s.start_y = 40.0;
    close.push_back(s);
  }
  players[2] = close;
  players[3] = {};
  const auto result =
      run_player_profiles(xg::reference_model(), dist, players, {0.0, 20.0}, {50}, 3000, 21);
  ASSERT_EQ(result.players.count(3), 0u);
  EXPECT_EQ(result.warnings.size(), 1u);
  for (const auto& cell : result.players.at(1)) EXPECT_NEAR(cell.delta(), 0.0, 1e-12);
  // Big chances convert near the clamp: a 20% finisher overperforms more often.
  const auto& close_cells = result.players.at(2);
  ASSERT_EQ(close_cells.size(), 2u);
  EXPECT_GT(close_cells[1].delta(), 0.0);
}

TEST(Augmentation, SmallRunIsDeterministicAndOrdered) {
  testing::SyntheticSpec spec;
  spec.n = 4000;
  spec.seed = 8;
  const auto ds = population();
  const auto train = xg::make_training_data(testing::synthetic_dataset(xg::reference_model(), spec));
  const auto target = ds.only_player(5);
  const auto dist = sampler::build_distribution(target.shots);

  AugmentationConfig cfg;
  cfg.alphas = {0.0, 25.0};
  cfg.m_values = {0, 800};
  cfg.runs = 6;
  cfg.seed = 17;
  const auto a = run_training_augmentation(train, target, dist, cfg);
  ASSERT_EQ(a.curve.size(), 4u);
  EXPECT_EQ(a.at(0.0, 0).mean_gax, a.base_gax);
  EXPECT_EQ(a.at(0.0, 0).sd_gax, 0.0);
  EXPECT_EQ(a.at(25.0, 800).runs_ok, 6u);
  // Labelling added shots as a better finisher raises the model, lowering GAX.
  EXPECT_LT(a.at(25.0, 800).mean_gax, a.at(0.0, 800).mean_gax);
  EXPECT_LE(a.at(25.0, 800).ci95_low, a.at(25.0, 800).mean_gax);

  cfg.threads = 3;
  const auto b = run_training_augmentation(train, target, dist, cfg);
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_EQ(a.curve[i].mean_gax, b.curve[i].mean_gax);
}

TEST(Mixture, AllocateCountsLargestRemainder) {
  EXPECT_EQ(allocate_counts({1, 1, 1}, 10), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(allocate_counts({100e3, 800e3, 50e3, 50e3}, 1000),
            (std::vector<std::size_t>{100, 800, 50, 50}));
  const auto c = allocate_counts({0.3, 0.3, 0.4}, 7);
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), 7u);
  EXPECT_EQ(c[2], 3u);
  EXPECT_THROW(allocate_counts({1, -1}, 5), ConfigError);
  EXPECT_THROW(allocate_counts({0, 0}, 5), ConfigError);
}

TEST(Mixture, MoreSkilledTrainingLowersObservedGax) {
  const auto ds = population();
  const auto dist = sampler::build_distribution(ds.shots);
  MixtureConfig cfg;
  cfg.allocations = {{1, 0, 0}, {0, 0, 1}};
  cfg.alpha_levels = {0.0, 10.0, 40.0};
  cfg.test_alphas = {20.0};
  cfg.test_ns = {100};
  cfg.train_size = 20000;
  cfg.reps = 2000;
  cfg.seed = 5;
  const auto result = run_skill_mixture(xg::reference_model(), dist, cfg);
  ASSERT_EQ(result.allocations.size(), 2u);
  EXPECT_EQ(result.allocations[1].counts, (std::vector<std::size_t>{0, 0, 20000}));
  const auto& plain = result.allocations[0].at(20.0, 100);
  const auto& skilled = result.allocations[1].at(20.0, 100);
  EXPECT_GT(plain.mean_gax, skilled.mean_gax);
  // Truth GAX uses the generating model, so it is shared across allocations.
  EXPECT_EQ(plain.mean_truth_gax, skilled.mean_truth_gax);
  EXPECT_GT(plain.mean_truth_gax, 0.0);
}

}  // namespace
}  // namespace xgbias::sim
