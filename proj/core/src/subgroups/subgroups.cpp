#include "xgbias/subgroups/subgroups.hpp"

#include <algorithm>
#include <cmath>

#include "xgbias/error.hpp"

namespace xgbias::subgroups {

std::string_view to_string(VolumeTier tier) {
  switch (tier) {
    case VolumeTier::kLow: return "low";
    case VolumeTier::kMid: return "mid";
    case VolumeTier::kHigh: return "high";
  }
  return "mid";
}

VolumeTier parse_volume_tier(std::string_view text) {
  if (text == "low") return VolumeTier::kLow;
  if (text == "mid") return VolumeTier::kMid;
  if (text == "high") return VolumeTier::kHigh;
  throw DataError("unknown volume tier '" + std::string(text) + "'");
}

double PositionPriors::for_position(Position p) const {
  switch (p) {
    case Position::kDefender: return defender;
    case Position::kMidfielder: return midfielder;
    case Position::kAttacker: return attacker;
  }
  return midfielder;
}

double smoothed_shot_volume(const PlayerProfile& profile, const PositionPriors& priors) {
  if (profile.total_shots < 0 || profile.total_minutes < 0) {
    throw DataError("player " + std::to_string(profile.player_id) + ": negative shots or minutes");
  }
  const double prior = priors.for_position(profile.primary_position);
  if (!(prior > 0.0)) throw ConfigError("position priors must be positive");
  return 90.0 * (profile.total_shots + (kPriorMinutes / 90.0) * prior) /
         (profile.total_minutes + kPriorMinutes);
}

VolumeTier classify_volume(double v, const VolumeThresholds& t) {
  if (v < t.low) return VolumeTier::kLow;
  if (v > t.high) return VolumeTier::kHigh;
  return VolumeTier::kMid;
}

VolumeThresholds thresholds_from_dataset(const ShotDataset& dataset, const PositionPriors& priors) {
  std::vector<double> volumes;
  for (const auto& [id, p] : dataset.players) {
    if (p.total_shots > 0) volumes.push_back(smoothed_shot_volume(p, priors));
  }
  if (volumes.empty()) throw DataError("no players with shots to derive volume thresholds");
  std::sort(volumes.begin(), volumes.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(volumes.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, volumes.size() - 1);
    return volumes[lo] + (pos - static_cast<double>(lo)) * (volumes[hi] - volumes[lo]);
  };
  return {quantile(0.2), quantile(0.8)};
}

std::string describe(const SubgroupKey& key) {
  return std::string(to_string(key.position)) + "/" + std::string(to_string(key.volume)) + "/" +
         std::string(to_string(key.team));
}

SubgroupKey assign_groups(const PlayerProfile& profile, const TeamRating& rating,
                          const VolumeThresholds& thresholds, const PositionPriors& priors) {
  return {classify_volume(smoothed_shot_volume(profile, priors), thresholds),
          profile.primary_position, rating.tier};
}

std::vector<SubgroupKey> group_shots(const ShotDataset& dataset, const VolumeThresholds& thresholds,
                                     const PositionPriors& priors) {
  std::vector<SubgroupKey> keys;
  keys.reserve(dataset.shots.size());
  const PlayerProfile unknown_player;
  const TeamRating unknown_team;
  for (const auto& s : dataset.shots) {
    auto p = dataset.players.find(s.player_id);
    auto t = dataset.teams.find(s.team_id);
    keys.push_back(assign_groups(p == dataset.players.end() ? unknown_player : p->second,
                                 t == dataset.teams.end() ? unknown_team : t->second, thresholds,
                                 priors));
  }
  return keys;
}

}  // namespace xgbias::subgroups
