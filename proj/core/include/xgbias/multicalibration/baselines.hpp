#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xgbias/multicalibration/multicalibration.hpp"
#include "xgbias/shot_data/types.hpp"

namespace xgbias::mcal {

// How the weighted "average player" mixes the fitted groups.
enum class WeightBasis { kPlayers, kShots };

// Share of players (with at least one shot) or of shots falling in each
// fitted group, in group order. `keys` holds one key per shot.
std::vector<double> group_weights(const MultiCalibratedModel& model, const ShotDataset& dataset,
                                  std::span<const SubgroupKey> keys, WeightBasis basis);

// Representative key for a fitted group (wildcards filled with defaults).
SubgroupKey representative_key(const GroupPattern& pattern);

// Sum over shots of sum_g weight_g * predict_as_group(shot, g). Throws
// ConfigError unless the weights align with the groups and sum to 1 +- 1e-9.
double weighted_average_player(const MultiCalibratedModel& model,
                               std::span<const xg::FeatureVector> shots,
                               std::span<const double> weights);

struct BaselineReport {
  std::size_t n_shots = 0;
  double goals = 0.0;
  double standard_xg = 0.0;                 // base model
  std::vector<double> cumulative_xg;        // per fitted group
  std::vector<double> weights;
  WeightBasis basis = WeightBasis::kPlayers;
  double weighted_average_xg = 0.0;

  double gax(std::size_t group) const { return goals - cumulative_xg[group]; }
  double weighted_gax() const { return goals - weighted_average_xg; }
  double standard_gax() const { return goals - standard_xg; }
};

BaselineReport baseline_report(const MultiCalibratedModel& model, const ShotDataset& shots,
                               std::vector<double> weights, WeightBasis basis);

struct LeaderboardRow {
  Id player_id = kUnknownId;
  std::string name;
  std::size_t shots = 0;
  std::size_t goals = 0;
  double standard_xg = 0.0;
  double multicalibrated_xg = 0.0;
  std::optional<double> provider_xg;

  double standard_gax() const { return static_cast<double>(goals) - standard_xg; }
  double multicalibrated_gax() const { return static_cast<double>(goals) - multicalibrated_xg; }
  std::optional<double> provider_gax() const {
    if (!provider_xg) return std::nullopt;
    return static_cast<double>(goals) - *provider_xg;
  }
};

struct OverperformanceSummary {
  std::size_t exceeders = 0;          // players with goals > xG
  double mean_overperformance = 0.0;  // mean of 100 * (goals - xG) / xG over exceeders
};

struct Leaderboard {
  std::vector<LeaderboardRow> rows;  // sorted by standard-model GAX, descending
  OverperformanceSummary standard;
  OverperformanceSummary multicalibrated;
  std::optional<OverperformanceSummary> provider;
  std::optional<double> spearman;  // standard vs multi-calibrated GAX; needs >= 2 rows
};

// Players with at least `min_goals` goals in `season`. Standard xG comes from
// the base model, multi-calibrated xG from each shot's own subgroup `keys`.
// Provider xG is summed when every qualifying shot has a value.
Leaderboard gax_leaderboard(const ShotDataset& season, std::span<const SubgroupKey> keys,
                            const MultiCalibratedModel& model,
                            const std::map<std::string, double>& provider_xg = {},
                            std::size_t min_goals = 5);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace xgbias::mcal
