#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xgbias {

using Id = std::int64_t;
inline constexpr Id kUnknownId = -1;

enum class BodyPart { kFoot, kHead, kOther };
enum class Position { kDefender, kMidfielder, kAttacker };
enum class TeamTier { kUclWinner, kTop25, kOther };

std::string_view to_string(BodyPart part);
std::string_view to_string(Position position);
std::string_view to_string(TeamTier tier);

BodyPart parse_body_part(std::string_view text);
Position parse_position(std::string_view text);
TeamTier parse_team_tier(std::string_view text);

// Provider (StatsBomb) pitch frame.
inline constexpr double kProviderLength = 120.0;
inline constexpr double kProviderWidth = 80.0;

struct ShotRecord {
  std::string shot_id;
  Id match_id = kUnknownId;
  Id player_id = kUnknownId;
  Id team_id = kUnknownId;
  int minute = 0;
  double start_x = 0.0;
  double start_y = 0.0;
  BodyPart body_part = BodyPart::kFoot;
  bool is_goal = false;
  bool is_open_play = true;
  bool is_deflected = false;
  bool is_own_goal = false;
};

// Throws DataError naming the shot when a field breaks the record invariants.
void validate(const ShotRecord& shot);

struct PlayerProfile {
  Id player_id = kUnknownId;
  std::string name;
  int total_shots = 0;
  int total_minutes = 0;
  Position primary_position = Position::kMidfielder;
};

struct TeamRating {
  Id team_id = kUnknownId;
  std::string name;
  std::optional<double> elo;  // empty when the club was not found in the ratings
  TeamTier tier = TeamTier::kOther;
};

struct ShotDataset {
  std::vector<ShotRecord> shots;
  std::map<Id, PlayerProfile> players;
  std::map<Id, TeamRating> teams;
  std::string provenance;

  std::size_t goals() const;
  double goal_rate() const;

  // Dataset with the same metadata and the shots at `indices`.
  ShotDataset subset(const std::vector<std::size_t>& indices) const;

  // Shots whose shooter is / is not `player_id`.
  ShotDataset only_player(Id player_id) const;
  ShotDataset without_player(Id player_id) const;
};

}  // namespace xgbias
