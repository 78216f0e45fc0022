#include "xgbias/shot_data/shot_cache.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"

namespace xgbias::data {
namespace {

std::filesystem::path sidecar(const std::filesystem::path& cache, const char* suffix) {
  auto out = cache;
  out.replace_extension();
  out += suffix;
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& file, std::size_t row) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataError(file.string() + ": row " + std::to_string(row + 2) + ": bad number '" + text +
                    "'");
  }
  return value;
}

bool parse_flag(const std::string& text, const std::filesystem::path& file, std::size_t row) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw DataError(file.string() + ": row " + std::to_string(row + 2) + ": bad flag '" + text + "'");
}

}  // namespace

std::filesystem::path players_sidecar(const std::filesystem::path& cache) {
  return sidecar(cache, ".players.csv");
}
std::filesystem::path teams_sidecar(const std::filesystem::path& cache) {
  return sidecar(cache, ".teams.csv");
}
std::filesystem::path provider_xg_sidecar(const std::filesystem::path& cache) {
  return sidecar(cache, ".provider_xg.csv");
}

void write_shot_cache(const std::filesystem::path& cache, const ShotDataset& dataset,
                      const std::map<std::string, double>& provider_xg) {
  {
    auto out = open_out(cache);
    out << kShotCacheHeader << '\n';
    for (const auto& s : dataset.shots) {
      csv::write_row(out, {s.shot_id, std::to_string(s.match_id), std::to_string(s.player_id),
                           std::to_string(s.team_id), std::to_string(s.minute),
                           fmt::format("{}", s.start_x), fmt::format("{}", s.start_y),
                           std::string(to_string(s.body_part)), s.is_goal ? "1" : "0",
                           s.is_open_play ? "1" : "0", s.is_deflected ? "1" : "0"});
    }
  }
  {
    auto out = open_out(players_sidecar(cache));
    out << "player_id,name,total_shots,total_minutes,primary_position\n";
    for (const auto& [id, p] : dataset.players) {
      csv::write_row(out, {std::to_string(id), p.name, std::to_string(p.total_shots),
                           std::to_string(p.total_minutes), std::string(to_string(p.primary_position))});
    }
  }
  {
    auto out = open_out(teams_sidecar(cache));
    out << "team_id,name,elo,tier\n";
    for (const auto& [id, t] : dataset.teams) {
      csv::write_row(out, {std::to_string(id), t.name, t.elo ? fmt::format("{}", *t.elo) : "",
                           std::string(to_string(t.tier))});
    }
  }
  if (!provider_xg.empty()) {
    auto out = open_out(provider_xg_sidecar(cache));
    out << "shot_id,xg\n";
    for (const auto& [id, xg] : provider_xg) csv::write_row(out, {id, fmt::format("{}", xg)});
  }
}

ShotDataset read_shot_cache(const std::filesystem::path& cache) {
  const auto rows = csv::read_file(cache);
  if (rows.empty()) throw DataError(cache.string() + ": empty cache file");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kShotCacheHeader) {
    throw DataError(cache.string() + ": unexpected header '" + header + "'");
  }
  const csv::Table table(rows);
  ShotDataset ds;
  ds.provenance = "cache:" + cache.filename().string();
  ds.shots.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    ShotRecord s;
    s.shot_id = r[0];
    s.match_id = parse_number<Id>(r[1], cache, i);
    s.player_id = parse_number<Id>(r[2], cache, i);
    s.team_id = parse_number<Id>(r[3], cache, i);
    s.minute = parse_number<int>(r[4], cache, i);
    s.start_x = parse_number<double>(r[5], cache, i);
    s.start_y = parse_number<double>(r[6], cache, i);
    s.body_part = parse_body_part(r[7]);
    s.is_goal = parse_flag(r[8], cache, i);
    s.is_open_play = parse_flag(r[9], cache, i);
    s.is_deflected = parse_flag(r[10], cache, i);
    validate(s);
    ds.shots.push_back(std::move(s));
  }

  if (const auto path = players_sidecar(cache); std::filesystem::exists(path)) {
    const auto t = csv::Table::from_file(path);
    for (std::size_t i = 0; i < t.size(); ++i) {
      PlayerProfile p;
      p.player_id = parse_number<Id>(t.at(i, "player_id"), path, i);
      p.name = t.at(i, "name");
      p.total_shots = parse_number<int>(t.at(i, "total_shots"), path, i);
      p.total_minutes = parse_number<int>(t.at(i, "total_minutes"), path, i);
      p.primary_position = parse_position(t.at(i, "primary_position"));
      ds.players.emplace(p.player_id, std::move(p));
    }
  } else {
    for (const auto& s : ds.shots) {
      if (s.player_id == kUnknownId) continue;
      auto& p = ds.players[s.player_id];
      p.player_id = s.player_id;
      ++p.total_shots;
    }
  }
  if (const auto path = teams_sidecar(cache); std::filesystem::exists(path)) {
    const auto t = csv::Table::from_file(path);
    for (std::size_t i = 0; i < t.size(); ++i) {
      TeamRating r;
      r.team_id = parse_number<Id>(t.at(i, "team_id"), path, i);
      r.name = t.at(i, "name");
      if (!t.at(i, "elo").empty()) r.elo = parse_number<double>(t.at(i, "elo"), path, i);
      r.tier = parse_team_tier(t.at(i, "tier"));
      ds.teams.emplace(r.team_id, std::move(r));
    }
  } else {
    for (const auto& s : ds.shots) {
      if (s.team_id == kUnknownId) continue;
      ds.teams[s.team_id].team_id = s.team_id;
    }
  }
  return ds;
}

std::map<std::string, double> read_provider_xg(const std::filesystem::path& cache) {
  std::map<std::string, double> out;
  const auto path = provider_xg_sidecar(cache);
  if (!std::filesystem::exists(path)) return out;
  const auto t = csv::Table::from_file(path);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[t.at(i, "shot_id")] = parse_number<double>(t.at(i, "xg"), path, i);
  }
  return out;
}

}  // namespace xgbias::data
