#include "xgbias/shot_data/statsbomb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "xgbias/error.hpp"
#include "xgbias/parallel.hpp"

namespace xgbias::data {
namespace {

using nlohmann::json;

std::string name_of(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_object()) return {};
  auto name = it->find("name");
  return (name != it->end() && name->is_string()) ? name->get<std::string>() : std::string{};
}

Id id_of(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_object()) return kUnknownId;
  auto id = it->find("id");
  return (id != it->end() && id->is_number_integer()) ? id->get<Id>() : kUnknownId;
}

double event_time(const json& ev) {
  return ev.value("minute", 0) + ev.value("second", 0) / 60.0;
}

bool sent_off(const json& ev) {
  for (const char* key : {"foul_committed", "bad_behaviour"}) {
    auto it = ev.find(key);
    if (it == ev.end() || !it->is_object()) continue;
    const std::string card = name_of(*it, "card");
    if (card == "Red Card" || card == "Second Yellow") return true;
  }
  return false;
}

BodyPart body_part_from(const std::string& name) {
  if (name == "Head") return BodyPart::kHead;
  if (name == "Right Foot" || name == "Left Foot") return BodyPart::kFoot;
  return BodyPart::kOther;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file");
  return json::parse(in);
}

template <typename T>
bool wanted(const std::vector<T>& allowed, const T& value) {
  return allowed.empty() || std::find(allowed.begin(), allowed.end(), value) != allowed.end();
}

}  // namespace

std::optional<Position> classify_position(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "Goalkeeper") return Position::kDefender;
  if (name.find("Back") != std::string::npos) return Position::kDefender;
  if (name.find("Midfield") != std::string::npos) return Position::kMidfielder;
  if (name.find("Wing") != std::string::npos || name.find("Forward") != std::string::npos ||
      name.find("Striker") != std::string::npos) {
    return Position::kAttacker;
  }
  return std::nullopt;
}

MatchExtract extract_match(const json& events, Id match_id) {
  if (!events.is_array()) throw DataError("event document is not an array");
  MatchExtract out;
  std::map<Id, double> on_since;
  double match_end = 0.0;

  auto bring_on = [&](Id player, double t) {
    if (player != kUnknownId && !on_since.contains(player)) on_since[player] = t;
  };
  auto take_off = [&](Id player, double t) {
    auto it = on_since.find(player);
    if (it == on_since.end()) return;
    out.minutes[player] += std::max(0.0, t - it->second);
    on_since.erase(it);
  };

  for (const auto& ev : events) {
    const int period = ev.value("period", 1);
    if (period >= 5) continue;  // penalty shoot-out
    const double t = event_time(ev);
    match_end = std::max(match_end, t);
    const std::string type = name_of(ev, "type");
    const Id player = id_of(ev, "player");
    if (player != kUnknownId) out.player_names.try_emplace(player, name_of(ev, "player"));
    const Id team = id_of(ev, "team");
    if (team != kUnknownId) out.team_names.try_emplace(team, name_of(ev, "team"));

    if (type == "Starting XI" || type == "Tactical Shift") {
      auto tactics = ev.find("tactics");
      if (tactics == ev.end()) continue;
      for (const auto& slot : tactics->value("lineup", json::array())) {
        const Id pid = id_of(slot, "player");
        if (pid == kUnknownId) continue;
        out.player_names.try_emplace(pid, name_of(slot, "player"));
        if (auto pos = classify_position(name_of(slot, "position"))) {
          (type == "Starting XI" ? out.starts : out.other_positions)[pid][*pos] += 1;
        }
        if (type == "Starting XI") bring_on(pid, 0.0);
      }
    } else if (type == "Substitution") {
      take_off(player, t);
      auto sub = ev.find("substitution");
      if (sub != ev.end()) {
        const Id replacement = id_of(*sub, "replacement");
        if (replacement != kUnknownId) {
          out.player_names.try_emplace(replacement, name_of(*sub, "replacement"));
          bring_on(replacement, t);
        }
      }
    } else if (sent_off(ev)) {
      take_off(player, t);
    }

    if (type != "Shot") continue;
    const auto& shot = ev.contains("shot") ? ev["shot"] : json::object();
    ShotRecord rec;
    rec.shot_id = ev.value("id", std::string{});
    rec.match_id = match_id;
    rec.player_id = player;
    rec.team_id = team;
    rec.minute = ev.value("minute", 0);
    rec.body_part = body_part_from(name_of(shot, "body_part"));
    rec.is_goal = name_of(shot, "outcome") == "Goal";
    rec.is_open_play = name_of(shot, "type") == "Open Play";
    rec.is_deflected = shot.value("deflected", false);
    rec.is_own_goal = false;  // own goals are separate event types, never shots
    const auto loc = ev.find("location");
    if (loc == ev.end() || !loc->is_array() || loc->size() < 2) {
      out.shot_errors.push_back("shot " + rec.shot_id + ": missing location");
      continue;
    }
    rec.start_x = (*loc)[0].get<double>();
    rec.start_y = (*loc)[1].get<double>();
    try {
      validate(rec);
    } catch (const DataError& e) {
      out.shot_errors.push_back(e.what());
      continue;
    }
    if (auto xg = shot.find("statsbomb_xg"); xg != shot.end() && xg->is_number()) {
      out.provider_xg[rec.shot_id] = xg->get<double>();
    }
    out.shots.push_back(std::move(rec));
  }
  for (auto it = on_since.begin(); it != on_since.end();) {
    const Id pid = it->first;
    ++it;
    take_off(pid, match_end);
  }
  return out;
}

bool passes(const ShotRecord& shot, const IngestFilter& filter) {
  if (filter.open_play_only && !shot.is_open_play) return false;
  if (filter.exclude_own_goals && shot.is_own_goal) return false;
  if (filter.player_id && shot.player_id != *filter.player_id) return false;
  return true;
}

IngestResult parse_event_data(const std::filesystem::path& root, const IngestFilter& filter,
                              unsigned threads) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw ConfigError("events directory not found: " + root.string());

  IngestResult result;
  auto& report = result.report;
  result.dataset.provenance = "statsbomb-open-data:" + root.string();

  struct MatchJob {
    Id match_id;
    std::string source;
    std::string date;
  };
  std::vector<MatchJob> jobs;

  const fs::path competitions_file = root / "competitions.json";
  if (!fs::exists(competitions_file)) {
    report.warnings.push_back("no competitions.json under " + root.string() +
                              "; dataset is empty");
    return result;
  }
  json competitions;
  try {
    competitions = read_json(competitions_file);
  } catch (const std::exception& e) {
    throw DataError(competitions_file.string() + ": " + e.what());
  }
  for (const auto& comp : competitions) {
    const Id cid = comp.value("competition_id", kUnknownId);
    const Id sid = comp.value("season_id", kUnknownId);
    const std::string season_name = comp.value("season_name", std::string{});
    if (!wanted(filter.competition_ids, cid) || !wanted(filter.season_ids, sid) ||
        !wanted(filter.season_names, season_name)) {
      continue;
    }
    const fs::path matches_file =
        root / "matches" / std::to_string(cid) / (std::to_string(sid) + ".json");
    const std::string source = std::to_string(cid) + "/" + std::to_string(sid);
    report.shots_per_source.try_emplace(source, 0);
    try {
      const json matches = read_json(matches_file);
      for (const auto& m : matches) {
        jobs.push_back({m.at("match_id").get<Id>(), source, m.value("match_date", std::string{})});
      }
    } catch (const std::exception& e) {
      report.errors.push_back(matches_file.string() + ": " + e.what());
    }
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const MatchJob& a, const MatchJob& b) { return a.match_id < b.match_id; });
  jobs.erase(std::unique(jobs.begin(), jobs.end(),
                         [](const MatchJob& a, const MatchJob& b) { return a.match_id == b.match_id; }),
             jobs.end());

  std::vector<std::optional<MatchExtract>> extracts(jobs.size());
  std::vector<std::string> job_errors(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const fs::path file = root / "events" / (std::to_string(jobs[i].match_id) + ".json");
    try {
      extracts[i] = extract_match(read_json(file), jobs[i].match_id);
    } catch (const std::exception& e) {
      job_errors[i] = file.string() + ": " + e.what();
    }
  });

  std::map<Id, double> minutes;
  std::map<Id, std::map<Position, int>> starts;
  std::map<Id, std::map<Position, int>> other_positions;
  std::map<Id, std::string> names;
  std::map<Id, std::string> team_names;
  auto& ds = result.dataset;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!jobs[i].date.empty() &&
        (result.earliest_match_date.empty() || jobs[i].date < result.earliest_match_date)) {
      result.earliest_match_date = jobs[i].date;
    }
    if (!job_errors[i].empty()) {
      report.errors.push_back(job_errors[i]);
      continue;
    }
    auto& ex = *extracts[i];
    ++report.matches_parsed;
    for (auto& msg : ex.shot_errors) {
      report.errors.push_back("events/" + std::to_string(jobs[i].match_id) + ".json: " + msg);
    }
    for (auto& [pid, m] : ex.minutes) minutes[pid] += m;
    for (auto& [pid, counts] : ex.starts)
      for (auto& [pos, c] : counts) starts[pid][pos] += c;
    for (auto& [pid, counts] : ex.other_positions)
      for (auto& [pos, c] : counts) other_positions[pid][pos] += c;
    names.merge(ex.player_names);
    team_names.merge(ex.team_names);
    report.shots_seen += ex.shots.size();
    for (auto& shot : ex.shots) {
      if (!passes(shot, filter)) continue;
      if (auto xg = ex.provider_xg.find(shot.shot_id); xg != ex.provider_xg.end()) {
        result.provider_xg.emplace(shot.shot_id, xg->second);
      }
      ++report.shots_per_source[jobs[i].source];
      ds.shots.push_back(std::move(shot));
    }
  }

  auto most_frequent = [](const std::map<Position, int>& counts) {
    Position best = Position::kMidfielder;
    int best_count = -1;
    for (Position p : {Position::kMidfielder, Position::kAttacker, Position::kDefender}) {
      auto it = counts.find(p);
      const int c = it == counts.end() ? 0 : it->second;
      if (c > best_count) {
        best = p;
        best_count = c;
      }
    }
    return best;
  };

  std::size_t unknown_positions = 0;
  for (const auto& [pid, name] : names) {
    PlayerProfile prof;
    prof.player_id = pid;
    prof.name = name;
    prof.total_minutes = static_cast<int>(std::lround(minutes.contains(pid) ? minutes[pid] : 0.0));
    if (starts.contains(pid)) {
      prof.primary_position = most_frequent(starts[pid]);
    } else if (other_positions.contains(pid)) {
      prof.primary_position = most_frequent(other_positions[pid]);
    } else {
      prof.primary_position = Position::kMidfielder;
      ++unknown_positions;
    }
    ds.players.emplace(pid, std::move(prof));
  }
  for (const auto& shot : ds.shots) {
    if (shot.player_id == kUnknownId) continue;
    auto& prof = ds.players[shot.player_id];
    prof.player_id = shot.player_id;
    ++prof.total_shots;
  }
  for (const auto& [tid, name] : team_names) {
    TeamRating rating;
    rating.team_id = tid;
    rating.name = name;
    ds.teams.emplace(tid, std::move(rating));
  }
  if (unknown_positions > 0) {
    report.warnings.push_back(std::to_string(unknown_positions) +
                              " players without a recorded position default to midfielder");
  }
  if (ds.shots.empty()) report.warnings.push_back("no shots left after filtering; dataset is empty");
  return result;
}

}  // namespace xgbias::data
