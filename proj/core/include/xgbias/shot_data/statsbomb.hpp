#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::data {

// Which shots survive ingestion and which part of the open-data tree is read.
struct IngestFilter {
  bool open_play_only = true;
  bool exclude_own_goals = true;
  std::vector<Id> competition_ids;         // empty = every competition
  std::vector<Id> season_ids;              // empty = every season
  std::vector<std::string> season_names;   // e.g. "2015/2016"; empty = every season
  std::optional<Id> player_id;             // keep only this shooter's shots
};

struct IngestReport {
  std::size_t matches_parsed = 0;
  std::size_t shots_seen = 0;
  std::map<std::string, std::size_t> shots_per_source;  // "<competition>/<season>" -> kept shots
  std::vector<std::string> errors;                      // "<file>: <message>"
  std::vector<std::string> warnings;
};

struct IngestResult {
  ShotDataset dataset;
  IngestReport report;
  std::map<std::string, double> provider_xg;  // shot_id -> provider xG, when present
  std::string earliest_match_date;            // ISO date, empty if no matches
};

// Per-match extraction, exposed for testing against in-memory documents.
struct MatchExtract {
  std::vector<ShotRecord> shots;                  // every shot event, unfiltered
  std::map<std::string, double> provider_xg;
  std::map<Id, double> minutes;                   // unrounded minutes on the pitch
  std::map<Id, std::map<Position, int>> starts;   // starting-XI positions
  std::map<Id, std::map<Position, int>> other_positions;  // from tactical shifts
  std::map<Id, std::string> player_names;
  std::map<Id, std::string> team_names;
  std::vector<std::string> shot_errors;
};

MatchExtract extract_match(const nlohmann::json& events, Id match_id);

// Maps a StatsBomb position name onto the three analysis classes.
// Goalkeepers count as defenders; unknown names return nullopt.
std::optional<Position> classify_position(const std::string& statsbomb_name);

bool passes(const ShotRecord& shot, const IngestFilter& filter);

// Reads competitions.json, matches/<competition>/<season>.json and
// events/<match>.json under `data_root`. Malformed files are reported in
// IngestResult::report.errors and skipped. Throws ConfigError when
// `data_root` does not exist.
IngestResult parse_event_data(const std::filesystem::path& data_root, const IngestFilter& filter,
                              unsigned threads = 0);

}  // namespace xgbias::data
