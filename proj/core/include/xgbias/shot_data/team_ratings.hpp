#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::data {

inline constexpr double kUclWinnerElo = 1950.0;
inline constexpr int kTopRankCutoff = 25;

// One row of a Club-Elo export (Rank,Club,Country,Level,Elo,From,To).
struct EloRow {
  std::string club;
  std::string country;
  double elo = 0.0;
  std::string from;  // ISO dates, may be empty
  std::string to;
};

// Reads a Club-Elo CSV. When `on_date` is given, keeps the rows whose
// [From, To] window contains it.
std::vector<EloRow> read_club_elo(const std::filesystem::path& path,
                                  const std::optional<std::string>& on_date = std::nullopt);

// Provider team name -> Club-Elo club name, from a two-column CSV
// (provider_name,elo_name).
std::map<std::string, std::string> read_name_alignment(const std::filesystem::path& path);

// Tier rule: ucl_winner iff elo > 1950 (strict); top25 iff rank <= 25 and
// not ucl_winner; other otherwise. `rank` is 1-based by descending Elo.
TeamTier tier_for(double elo, int rank);

// Lower-cased ASCII alphanumerics with single spaces; used when no explicit
// alignment entry exists.
std::string normalize_club_name(const std::string& name);

// Assigns a rating and tier to every team in `team_names`. Teams that
// cannot be matched get tier `other` and a line in `log`.
std::map<Id, TeamRating> load_team_ratings(const std::vector<EloRow>& rows,
                                           const std::map<Id, std::string>& team_names,
                                           const std::map<std::string, std::string>& alignment,
                                           std::vector<std::string>* log = nullptr);

}  // namespace xgbias::data
