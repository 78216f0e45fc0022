#include "xgbias/shot_data/team_ratings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"

namespace xgbias::data {

std::vector<EloRow> read_club_elo(const std::filesystem::path& path,
                                  const std::optional<std::string>& on_date) {
  const auto table = csv::Table::from_file(path);
  std::vector<EloRow> rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    EloRow row;
    row.club = table.at(i, "Club");
    row.country = table.has_column("Country") ? table.at(i, "Country") : std::string{};
    const std::string& elo = table.at(i, "Elo");
    try {
      std::size_t used = 0;
      row.elo = std::stod(elo, &used);
      if (used != elo.size()) throw std::invalid_argument(elo);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": row " + std::to_string(i + 2) + ": non-numeric Elo '" +
                      elo + "'");
    }
    if (table.has_column("From")) row.from = table.at(i, "From");
    if (table.has_column("To")) row.to = table.at(i, "To");
    if (on_date) {
      if (!row.from.empty() && row.from > *on_date) continue;
      if (!row.to.empty() && row.to < *on_date) continue;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> read_name_alignment(const std::filesystem::path& path) {
  const auto table = csv::Table::from_file(path);
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out[table.at(i, "provider_name")] = table.at(i, "elo_name");
  }
  return out;
}

TeamTier tier_for(double elo, int rank) {
  if (elo > kUclWinnerElo) return TeamTier::kUclWinner;
  if (rank >= 1 && rank <= kTopRankCutoff) return TeamTier::kTop25;
  return TeamTier::kOther;
}

std::string normalize_club_name(const std::string& name) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::map<Id, TeamRating> load_team_ratings(const std::vector<EloRow>& rows,
                                           const std::map<Id, std::string>& team_names,
                                           const std::map<std::string, std::string>& alignment,
                                           std::vector<std::string>* log) {
  // Rank by descending Elo; ties keep file order.
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].elo > rows[b].elo; });
  std::unordered_map<std::string, std::pair<double, int>> by_name;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& row = rows[order[r]];
    by_name.try_emplace(normalize_club_name(row.club), row.elo, static_cast<int>(r + 1));
  }

  std::map<Id, TeamRating> out;
  for (const auto& [tid, name] : team_names) {
    TeamRating rating;
    rating.team_id = tid;
    rating.name = name;
    auto aligned = alignment.find(name);
    const std::string key = normalize_club_name(aligned != alignment.end() ? aligned->second : name);
    if (auto hit = by_name.find(key); hit != by_name.end()) {
      rating.elo = hit->second.first;
      rating.tier = tier_for(hit->second.first, hit->second.second);
    } else {
      rating.tier = TeamTier::kOther;
      if (log) log->push_back("team '" + name + "' not found in Elo ratings; tier other");
    }
    out.emplace(tid, std::move(rating));
  }
  return out;
}

}  // namespace xgbias::data
