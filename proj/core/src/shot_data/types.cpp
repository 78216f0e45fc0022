#include "xgbias/shot_data/types.hpp"

#include <cmath>

#include "xgbias/error.hpp"

namespace xgbias {

std::string_view to_string(BodyPart part) {
  switch (part) {
    case BodyPart::kFoot: return "foot";
    case BodyPart::kHead: return "head";
    case BodyPart::kOther: return "other";
  }
  return "foot";
}

std::string_view to_string(Position position) {
  switch (position) {
    case Position::kDefender: return "defender";
    case Position::kMidfielder: return "midfielder";
    case Position::kAttacker: return "attacker";
  }
  return "midfielder";
}

std::string_view to_string(TeamTier tier) {
  switch (tier) {
    case TeamTier::kUclWinner: return "ucl_winner";
    case TeamTier::kTop25: return "top25";
    case TeamTier::kOther: return "other";
  }
  return "other";
}

BodyPart parse_body_part(std::string_view text) {
  if (text == "foot") return BodyPart::kFoot;
  if (text == "head") return BodyPart::kHead;
  if (text == "other") return BodyPart::kOther;
  throw DataError("unknown body part '" + std::string(text) + "'");
}

Position parse_position(std::string_view text) {
  if (text == "defender") return Position::kDefender;
  if (text == "midfielder") return Position::kMidfielder;
  if (text == "attacker") return Position::kAttacker;
  throw DataError("unknown position '" + std::string(text) + "'");
}

TeamTier parse_team_tier(std::string_view text) {
  if (text == "ucl_winner") return TeamTier::kUclWinner;
  if (text == "top25") return TeamTier::kTop25;
  if (text == "other") return TeamTier::kOther;
  throw DataError("unknown team tier '" + std::string(text) + "'");
}

void validate(const ShotRecord& shot) {
  auto fail = [&](const std::string& what) {
    throw DataError("shot " + shot.shot_id + ": " + what);
  };
  if (!std::isfinite(shot.start_x) || shot.start_x < 0.0 || shot.start_x > kProviderLength) {
    fail("start_x " + std::to_string(shot.start_x) + " outside [0,120]");
  }
  if (!std::isfinite(shot.start_y) || shot.start_y < 0.0 || shot.start_y > kProviderWidth) {
    fail("start_y " + std::to_string(shot.start_y) + " outside [0,80]");
  }
  if (shot.minute < 0) fail("negative minute");
  if (shot.is_own_goal && shot.is_open_play) fail("own goal marked as open play");
}

std::size_t ShotDataset::goals() const {
  std::size_t n = 0;
  for (const auto& s : shots) n += s.is_goal ? 1 : 0;
  return n;
}

double ShotDataset::goal_rate() const {
  return shots.empty() ? 0.0 : static_cast<double>(goals()) / static_cast<double>(shots.size());
}

ShotDataset ShotDataset::subset(const std::vector<std::size_t>& indices) const {
  ShotDataset out;
  out.players = players;
  out.teams = teams;
  out.provenance = provenance;
  out.shots.reserve(indices.size());
  for (auto i : indices) out.shots.push_back(shots.at(i));
  return out;
}

ShotDataset ShotDataset::only_player(Id player_id) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    if (shots[i].player_id == player_id) idx.push_back(i);
  }
  return subset(idx);
}

ShotDataset ShotDataset::without_player(Id player_id) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    if (shots[i].player_id != player_id) idx.push_back(i);
  }
  return subset(idx);
}

}  // namespace xgbias
