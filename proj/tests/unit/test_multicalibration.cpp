#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "xgbias/error.hpp"
#include "xgbias/multicalibration/baselines.hpp"
#include "xgbias/multicalibration/multicalibration.hpp"
#include "xgbias/rng.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::mcal {
namespace {

const GroupPattern kAttackerHigh{VolumeTier::kHigh, Position::kAttacker, std::nullopt};

// Shots labelled by the reference model, except attacker/high shooters who
// convert ten points more often.
struct Sample {
  std::vector<xg::FeatureVector> features;
  std::vector<std::uint8_t> labels;
  std::vector<SubgroupKey> keys;
};

Sample injected_sample(std::size_t n, std::uint64_t seed, double boost = 0.10) {
  const auto base = xg::reference_model();
  Rng rng(seed);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 90.0 + 29.0 * rng.uniform();
    const double y = 20.0 + 40.0 * rng.uniform();
    const auto f = xg::extract_features(x, y, rng.uniform() < 0.2 ? BodyPart::kHead : BodyPart::kFoot);
    SubgroupKey key;
    key.position = static_cast<Position>(i % 3);
    key.volume = static_cast<VolumeTier>((i / 3) % 3);
    double p = base.predict(f);
    if (kAttackerHigh.matches(key)) p = std::min(1.0, p + boost);
    s.features.push_back(f);
    s.labels.push_back(rng.bernoulli(p) ? 1 : 0);
    s.keys.push_back(key);
  }
  return s;
}

TEST(BinSchema, DefaultAndCustomEdges) {
  const BinSchema schema;
  EXPECT_EQ(schema.size(), 10u);
  EXPECT_EQ(schema.bin_of(0.0), 0u);
  EXPECT_EQ(schema.bin_of(0.015), 1u);
  EXPECT_EQ(schema.bin_of(0.399), 8u);
  EXPECT_EQ(schema.bin_of(0.4), 9u);
  EXPECT_EQ(schema.bin_of(1.0), 9u);
  EXPECT_THROW(BinSchema({0.0, 0.5, 0.5, 1.0}), ConfigError);
  EXPECT_THROW(BinSchema({0.1, 1.0}), ConfigError);
  EXPECT_EQ(BinSchema({0.0, 0.5, 1.0}).bin_of(0.5), 1u);
}

TEST(Groups, PatternsAndDefaults) {
  const auto groups = position_volume_groups();
  ASSERT_EQ(groups.size(), 9u);
  EXPECT_EQ(groups[8], kAttackerHigh);
  EXPECT_EQ(groups[0].describe(), "defender/low/*");
  SubgroupKey key{VolumeTier::kHigh, Position::kAttacker, TeamTier::kTop25};
  EXPECT_TRUE(kAttackerHigh.matches(key));
  key.volume = VolumeTier::kMid;
  EXPECT_FALSE(kAttackerHigh.matches(key));
  EXPECT_EQ(group_pattern_from_json(to_json(groups[4])), groups[4]);
}

TEST(Fit, InjectedGroupIsCorrectedFirst) {
  const auto sample = injected_sample(90000, 4);
  std::vector<IterationTrace> trace;
  FitOptions options;
  options.tolerance = 0.03;
  const auto model = fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                          sample.keys, position_volume_groups(), BinSchema(),
                                          options, &trace);
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.front().group_index, 8u);
  EXPECT_GT(trace.front().violation_before, 0.06);
  for (const auto& t : trace) EXPECT_LT(t.violation_after, t.violation_before);
  ASSERT_TRUE(model.converged());

  std::vector<double> preds;
  for (std::size_t i = 0; i < sample.features.size(); ++i) {
    preds.push_back(model.predict(sample.features[i], sample.keys[i]));
  }
  for (const auto& c : cell_status(preds, sample.labels, sample.keys, model.groups(), model.schema())) {
    if (c.n >= options.min_support) {
      EXPECT_LE(std::abs(c.violation()), options.tolerance);
    }
  }
  // Attacker/high predictions rise on average, others barely move.
  double lift_target = 0, lift_other = 0;
  std::size_t n_target = 0, n_other = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - model.base().predict(sample.features[i]);
    if (kAttackerHigh.matches(sample.keys[i])) {
      lift_target += d;
      ++n_target;
    } else {
      lift_other += d;
      ++n_other;
    }
  }
  EXPECT_GT(lift_target / n_target, 0.05);
  EXPECT_LT(std::abs(lift_other / n_other), 0.02);
}

TEST(Fit, StopsAtIterationCapAndValidatesInput) {
  const auto sample = injected_sample(20000, 5);
  FitOptions capped;
  capped.max_iterations = 0;
  const auto model = fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                          sample.keys, position_volume_groups(), BinSchema(), capped);
  EXPECT_FALSE(model.converged());
  EXPECT_TRUE(model.updates().empty());

  FitOptions impossible;
  impossible.min_support = 1000000;
  EXPECT_THROW(fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                    sample.keys, position_volume_groups(), BinSchema(), impossible),
               DataError);
  std::vector<std::uint8_t> short_labels(3, 0);
  EXPECT_THROW(fit_multicalibration(xg::reference_model(), sample.features, short_labels, sample.keys),
               DataError);
  FitOptions bad;
  bad.tolerance = 0.0;
  EXPECT_THROW(fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                    sample.keys, position_volume_groups(), BinSchema(), bad),
               ConfigError);
}

TEST(Persistence, JsonRoundTripReplaysIdentically) {
  const auto sample = injected_sample(30000, 6);
  FitOptions options;
  options.tolerance = 0.03;
  const auto model = fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                          sample.keys, position_volume_groups(), BinSchema(), options);
  const auto path = std::filesystem::temp_directory_path() / "xgbias_mc_roundtrip.json";
  save_multicalibrated(path, model);
  const auto loaded = load_multicalibrated(path);
  std::filesystem::remove(path);
  EXPECT_EQ(loaded.updates().size(), model.updates().size());
  EXPECT_EQ(loaded.converged(), model.converged());
  for (std::size_t i = 0; i < 2000; ++i) {
    ASSERT_EQ(loaded.predict(sample.features[i], sample.keys[i]),
              model.predict(sample.features[i], sample.keys[i]));
  }
  auto j = to_json(model);
  j["updates"] = nlohmann::json::array({{{"group", 99}, {"bin", 0}, {"delta", 0.1}, {"iter", 0}}});
  EXPECT_THROW(multicalibrated_from_json(j), DataError);
}

TEST(Baselines, OneHotWeightsReproduceGroupTotals) {
  const auto sample = injected_sample(30000, 7);
  FitOptions options;
  options.tolerance = 0.03;
  const auto model = fit_multicalibration(xg::reference_model(), sample.features, sample.labels,
                                          sample.keys, position_volume_groups(), BinSchema(), options);
  ShotDataset season;
  for (double x : {100.0, 108.0, 114.0}) {
    ShotRecord s;
    s.start_x = x;
    s.start_y = 38;
    s.is_goal = x > 110;
    season.shots.push_back(s);
  }
  std::vector<double> w(9, 0.0);
  w[8] = 1.0;
  const auto report = baseline_report(model, season, w, WeightBasis::kShots);
  EXPECT_EQ(report.n_shots, 3u);
  EXPECT_EQ(report.goals, 1.0);
  EXPECT_NEAR(report.weighted_average_xg, report.cumulative_xg[8], 1e-12);
  EXPECT_GT(report.cumulative_xg[8], report.standard_xg);
  EXPECT_THROW(baseline_report(model, season, std::vector<double>(9, 0.5), WeightBasis::kShots),
               ConfigError);
  EXPECT_THROW(baseline_report(model, season, {1.0}, WeightBasis::kShots), ConfigError);
}

TEST(Baselines, WeightsCountPlayersOrShots) {
  const MultiCalibratedModel model(xg::reference_model(), position_volume_groups(), BinSchema(), {});
  ShotDataset ds;
  std::vector<SubgroupKey> keys;
  auto add = [&](Id player, Position pos) {
    ShotRecord s;
    s.player_id = player;
    ds.shots.push_back(s);
    keys.push_back({VolumeTier::kLow, pos, TeamTier::kOther});
  };
  add(1, Position::kDefender);
  add(1, Position::kDefender);
  add(1, Position::kDefender);
  add(2, Position::kAttacker);
  const auto by_players = group_weights(model, ds, keys, WeightBasis::kPlayers);
  EXPECT_DOUBLE_EQ(by_players[0], 0.5);
  EXPECT_DOUBLE_EQ(by_players[6], 0.5);
  const auto by_shots = group_weights(model, ds, keys, WeightBasis::kShots);
  EXPECT_DOUBLE_EQ(by_shots[0], 0.75);
  EXPECT_DOUBLE_EQ(by_shots[6], 0.25);

  const MultiCalibratedModel narrow(xg::reference_model(), {kAttackerHigh}, BinSchema(), {});
  EXPECT_THROW(narrow.predict_as_group(xg::extract_features(100, 40, BodyPart::kFoot),
                                       SubgroupKey{}),
               ConfigError);
}

TEST(Spearman, TiesUseAverageRanks) {
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(spearman(std::vector<double>{1, 1, 2}, std::vector<double>{1, 2, 3}),
              1.5 / std::sqrt(3.0), 1e-12);
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{1}), DataError);
  EXPECT_THROW(spearman(std::vector<double>{1, 1}, std::vector<double>{1, 2}), DataError);
}

TEST(Leaderboard, FiltersSortsAndSummarises) {
  const MultiCalibratedModel model(xg::reference_model(), position_volume_groups(), BinSchema(), {});
  ShotDataset season;
  std::map<std::string, double> provider;
  auto add = [&](Id player, double x, bool goal) {
    ShotRecord s;
    s.shot_id = "p" + std::to_string(player) + "_" + std::to_string(season.shots.size());
    s.player_id = player;
    s.start_x = x;
    s.start_y = 40;
    s.is_goal = goal;
    season.shots.push_back(s);
    if (player != 3) provider[s.shot_id] = 0.2;
  };
  for (int i = 0; i < 6; ++i) add(1, 108, true);   // six goals from 10.5 m
  for (int i = 0; i < 10; ++i) add(2, 110, i < 5);  // five goals
  for (int i = 0; i < 3; ++i) add(3, 112, true);    // below min goals
  season.players[1].name = "one";
  std::vector<SubgroupKey> keys(season.shots.size());
  const auto board = gax_leaderboard(season, keys, model, provider, 5);
  ASSERT_EQ(board.rows.size(), 2u);
  EXPECT_EQ(board.rows[0].player_id, 1);
  EXPECT_EQ(board.rows[0].name, "one");
  const double p108 = model.base().predict(xg::extract_features(108, 40, BodyPart::kFoot));
  EXPECT_NEAR(board.rows[0].standard_xg, 6 * p108, 1e-12);
  EXPECT_EQ(board.rows[0].standard_xg, board.rows[0].multicalibrated_xg);
  EXPECT_NEAR(*board.rows[0].provider_gax(), 6 - 1.2, 1e-12);
  EXPECT_EQ(board.standard.exceeders, 2u);
  EXPECT_NEAR(*board.spearman, 1.0, 1e-15);
  ASSERT_TRUE(board.provider.has_value());
  EXPECT_NEAR(board.provider->mean_overperformance,
              0.5 * (100 * (6 - 1.2) / 1.2 + 100 * (5 - 2.0) / 2.0), 1e-9);
}

}  // namespace
}  // namespace xgbias::mcal
