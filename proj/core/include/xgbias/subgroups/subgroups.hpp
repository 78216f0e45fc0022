#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::subgroups {

enum class VolumeTier { kLow, kMid, kHigh };

std::string_view to_string(VolumeTier tier);
VolumeTier parse_volume_tier(std::string_view text);

// Median shots per 90 by position, used as the smoothing prior.
struct PositionPriors {
  double defender = 0.4;
  double midfielder = 1.1;
  double attacker = 2.1;

  double for_position(Position p) const;
};

// Prior weight of 270 minutes, i.e. three full games.
inline constexpr double kPriorMinutes = 270.0;

// Laplace-smoothed shots per 90:
//   90 * (shots + 3 * prior) / (minutes + 270)
// Equals the positional prior with no minutes and tends to the raw rate as
// minutes grow. Throws DataError for negative counts.
double smoothed_shot_volume(const PlayerProfile& profile, const PositionPriors& priors = {});

struct VolumeThresholds {
  double low = 0.875;   // strictly below -> low
  double high = 2.526;  // strictly above -> high
};

VolumeTier classify_volume(double shots_per_90, const VolumeThresholds& thresholds = {});

// 20th / 80th percentiles (linear interpolation) of smoothed volume over the
// players that have at least one shot in `dataset`.
VolumeThresholds thresholds_from_dataset(const ShotDataset& dataset, const PositionPriors& priors = {});

struct SubgroupKey {
  VolumeTier volume = VolumeTier::kMid;
  Position position = Position::kMidfielder;
  TeamTier team = TeamTier::kOther;

  auto operator<=>(const SubgroupKey&) const = default;
};

std::string describe(const SubgroupKey& key);

SubgroupKey assign_groups(const PlayerProfile& profile, const TeamRating& rating,
                          const VolumeThresholds& thresholds = {},
                          const PositionPriors& priors = {});

// Key per shot from the shooter's profile and the shooting team's rating.
// Unknown players fall back to an empty profile (pure prior), unknown teams
// to tier `other`.
std::vector<SubgroupKey> group_shots(const ShotDataset& dataset,
                                     const VolumeThresholds& thresholds = {},
                                     const PositionPriors& priors = {});

}  // namespace xgbias::subgroups
