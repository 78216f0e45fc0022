#include "xgbias_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"
#include "xgbias/goal_dist/poisson_binomial.hpp"
#include "xgbias/goal_dist/shot_filter.hpp"
#include "xgbias/multicalibration/baselines.hpp"
#include "xgbias/multicalibration/multicalibration.hpp"
#include "xgbias/report/figures.hpp"
#include "xgbias/report/manifest.hpp"
#include "xgbias/report/results.hpp"
#include "xgbias/shot_data/shot_cache.hpp"
#include "xgbias/shot_data/split.hpp"
#include "xgbias/shot_data/statsbomb.hpp"
#include "xgbias/shot_data/team_ratings.hpp"
#include "xgbias/sim/experiments.hpp"
#include "xgbias/subgroups/calibration.hpp"
#include "xgbias/xg_core/metrics.hpp"
#include "xgbias/xg_core/model_io.hpp"

namespace xgbias::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<double> kDefaultAlphas = {0, 5, 10, 15, 25};
const std::vector<std::size_t> kDefaultShots = {25, 50, 75, 100, 125, 150};

// Inputs, outputs and manifest of one command invocation.
class Session {
 public:
  Session(std::string command, std::vector<std::string> argv)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.argv = std::move(argv);
  }

  fs::path input(const std::string& flag, const fs::path& path) {
    if (path.empty()) throw ConfigError(flag + ": required");
    if (!fs::is_regular_file(path)) throw ConfigError(flag + ": no such file " + path.string());
    manifest_.add_input(path);
    inputs_.push_back(fs::weakly_canonical(path));
    return path;
  }

  // The primary output fixes the output directory and the manifest name.
  fs::path primary_output(const std::string& flag, const fs::path& path) {
    if (path.empty()) throw ConfigError(flag + ": required");
    out_dir_ = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    stem_ = path.stem().string();
    manifest_path_ = out_dir_ / (stem_ + ".manifest.json");
    declare(manifest_path_, false);
    return declare(path);
  }

  // Output next to the primary one: <stem><suffix>.
  fs::path sibling(const std::string& suffix) { return declare(out_dir_ / (stem_ + suffix)); }

  fs::path declare(const fs::path& path, bool listed = true) {
    const auto canonical = fs::weakly_canonical(path);
    for (const auto& in : inputs_) {
      if (in == canonical) throw ConfigError("refusing to overwrite input file " + path.string());
    }
    if (listed) manifest_.outputs.push_back(path.lexically_relative(out_dir_).generic_string());
    return path;
  }

  void prepare() {
    fs::create_directories(out_dir_);
    prepared_ = true;
  }

  void set_config(json config) { manifest_.config = std::move(config); }

  void finish(const std::string& status = "ok") {
    if (!prepared_) return;
    manifest_.status = status;
    manifest_.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    report::save_manifest(manifest_path_, manifest_);
  }

  bool prepared() const { return prepared_; }
  const fs::path& manifest_path() const { return manifest_path_; }

 private:
  report::RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> inputs_;
  fs::path out_dir_;
  std::string stem_;
  fs::path manifest_path_;
  bool prepared_ = false;
};

// Flags that may also come from a TOML config file; flags win.
class ConfigFlags {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    auto& slot = values_[key];
    options_.emplace_back(key, app->add_option(name, slot, help));
  }

  json merge(const std::string& config_file) const {
    json cfg = config_file.empty() ? json::object() : load_toml(config_file);
    if (!cfg.is_object()) throw ConfigError("--config: top level must be a table");
    for (const auto& [key, option] : options_) {
      if (option->count() > 0) cfg[key] = values_.at(key);
    }
    return cfg;
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

struct Options {
  unsigned threads = 0;
  std::string seed;
  std::string out;
  std::string cache;
  std::string model;
  std::string config;
  // ingest
  std::string events_dir, elo, elo_date, alignment, competitions, seasons, player_id;
  bool include_set_pieces = false;
  // train
  double test_fraction = 0.2;
  double penalty_c = 1.0;
  // finishing
  std::string player, filters;
  // calibration / multicalibration
  std::string group_by = "none";
  std::string volume_thresholds = "fixed";
  std::size_t min_bin_n = subgroups::kMinBinShots;
  double bandwidth = subgroups::kDefaultBandwidth;
  std::string mc;
  std::string shots_cache;
  std::string weights = "players";
  double tolerance = 0.01;
  int max_iter = 100;
  std::size_t min_support = 100;
  std::size_t min_goals = 5;
  // figure
  std::string figure_id;
  std::vector<std::string> figure_inputs;
  bool list_figures = false;
  // replay
  std::string manifest;
};

std::string seed_or_throw(const Options& o) {
  if (o.seed.empty()) throw ConfigError("--seed: this command is randomized and needs an explicit seed");
  return o.seed;
}

xg::XgModel load_model_input(Session& s, const std::string& flag, const std::string& spec) {
  if (spec == "reference") return xg::reference_model();
  return xg::load_model(s.input(flag, spec));
}

std::vector<xg::FeatureVector> features_of(const ShotDataset& ds) {
  std::vector<xg::FeatureVector> out;
  out.reserve(ds.shots.size());
  for (const auto& shot : ds.shots) out.push_back(xg::extract_features(shot));
  return out;
}

std::vector<std::uint8_t> labels_of(const ShotDataset& ds) {
  std::vector<std::uint8_t> out;
  out.reserve(ds.shots.size());
  for (const auto& shot : ds.shots) out.push_back(shot.is_goal ? 1 : 0);
  return out;
}

subgroups::VolumeThresholds thresholds_for(const Options& o, const ShotDataset& ds) {
  if (o.volume_thresholds == "fixed") return {};
  if (o.volume_thresholds == "data") return subgroups::thresholds_from_dataset(ds);
  throw ConfigError("--volume-thresholds: expected fixed or data, got '" + o.volume_thresholds + "'");
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(); }

// ---------------------------------------------------------------- ingest

void cmd_ingest(Session& s, const Options& o, std::ostream& out) {
  fs::path events = o.events_dir;
  if (events.empty()) {
    if (const char* env = std::getenv("XGBIAS_DATA_DIR")) events = env;
  }
  if (events.empty()) throw ConfigError("--events-dir: not given and XGBIAS_DATA_DIR is unset");
  if (!fs::is_directory(events)) throw ConfigError("--events-dir: no such directory " + events.string());
  if (fs::is_regular_file(events / "competitions.json")) s.input("--events-dir", events / "competitions.json");
  const auto elo = s.input("--elo", o.elo);
  std::map<std::string, std::string> alignment;
  if (!o.alignment.empty()) alignment = data::read_name_alignment(s.input("--alignment", o.alignment));

  data::IngestFilter filter;
  filter.open_play_only = !o.include_set_pieces;
  if (!o.competitions.empty()) {
    for (double c : get_doubles(json{{"competitions", o.competitions}}, "competitions", {})) {
      filter.competition_ids.push_back(static_cast<Id>(c));
    }
  }
  if (!o.seasons.empty()) {
    std::stringstream in(o.seasons);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.find('/') != std::string::npos) filter.season_names.push_back(item);
      else filter.season_ids.push_back(parse_i64(item, "--seasons"));
    }
  }
  if (!o.player_id.empty()) filter.player_id = parse_i64(o.player_id, "--player-id");

  const auto cache = s.primary_output("--out", o.out);
  s.declare(data::players_sidecar(cache));
  s.declare(data::teams_sidecar(cache));
  const auto provider = s.declare(data::provider_xg_sidecar(cache));
  const auto report_path = s.sibling(".ingest.json");
  s.prepare();

  auto result = data::parse_event_data(events, filter, o.threads);
  if (result.report.matches_parsed == 0) {
    throw DataError("no matches parsed under " + events.string());
  }
  const std::string date = o.elo_date.empty() ? result.earliest_match_date : o.elo_date;
  const auto rows = data::read_club_elo(elo, date.empty() ? std::nullopt : std::optional(date));
  std::map<Id, std::string> team_names;
  for (const auto& [id, team] : result.dataset.teams) team_names[id] = team.name;
  std::vector<std::string> rating_log;
  result.dataset.teams = data::load_team_ratings(rows, team_names, alignment, &rating_log);
  data::write_shot_cache(cache, result.dataset, result.provider_xg);
  if (result.provider_xg.empty()) fs::remove(provider);

  const auto& rep = result.report;
  write_json(report_path, {{"matches_parsed", rep.matches_parsed},
                           {"shots_seen", rep.shots_seen},
                           {"shots_kept", result.dataset.shots.size()},
                           {"goals", result.dataset.goals()},
                           {"shots_per_source", rep.shots_per_source},
                           {"errors", rep.errors},
                           {"warnings", rep.warnings},
                           {"elo_date", date},
                           {"team_rating_log", rating_log}});
  s.set_config({{"events_dir", events.string()},
                {"elo", elo.string()},
                {"elo_date", date},
                {"alignment", o.alignment},
                {"open_play_only", filter.open_play_only},
                {"competitions", filter.competition_ids},
                {"season_ids", filter.season_ids},
                {"season_names", filter.season_names},
                {"player_id", filter.player_id ? json(*filter.player_id) : json()}});
  out << fmt::format("ingested {} shots ({} goals) from {} matches; {} file errors\n",
                     result.dataset.shots.size(), result.dataset.goals(), rep.matches_parsed,
                     rep.errors.size());
}

// ---------------------------------------------------------------- train / evaluate

json metrics_json(const xg::EvalReport& r) {
  return {{"auroc", optional_json(r.auroc)}, {"brier", r.brier}, {"n_test", r.n_test}};
}

void cmd_train(Session& s, const Options& o, std::ostream& out) {
  const auto seed = parse_u64(seed_or_throw(o), "--seed");
  if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) {
    throw ConfigError("--test-fraction: must lie strictly between 0 and 1");
  }
  if (!(o.penalty_c > 0.0)) throw ConfigError("--penalty-c: must be positive");
  const auto cache = s.input("--cache", o.cache);
  const auto model_path = s.primary_output("--out", o.out);
  const auto metrics_path = s.sibling(".metrics.json");
  const auto test_cache = s.sibling(".test.csv");
  s.declare(data::players_sidecar(test_cache));
  s.declare(data::teams_sidecar(test_cache));
  s.set_config({{"cache", cache.string()},
                {"seed", seed},
                {"test_fraction", o.test_fraction},
                {"penalty_c", o.penalty_c}});

  const auto dataset = data::read_shot_cache(cache);
  const auto split = data::stratified_split(dataset, o.test_fraction, seed);
  xg::TrainOptions options;
  options.penalty_c = o.penalty_c;
  const auto model = xg::train_logistic(split.train, options);
  s.prepare();
  xg::save_model(model_path, model);
  data::write_shot_cache(test_cache, split.test);
  const auto report = xg::evaluate(model, split.test);
  json metrics = metrics_json(report);
  metrics["n_train"] = split.train.shots.size();
  metrics["converged"] = model.meta().converged;
  metrics["iterations"] = model.meta().iterations;
  write_json(metrics_path, metrics);
  if (!model.meta().converged) {
    throw NumericalError(fmt::format("training did not converge within {} iterations (gradient {})",
                                     options.max_iter, model.meta().gradient_max_norm));
  }
  out << fmt::format("trained on {} shots; held-out AUROC {} Brier {:.4f} (n={})\n",
                     split.train.shots.size(),
                     report.auroc ? fmt::format("{:.4f}", *report.auroc) : "n/a", report.brier,
                     report.n_test);
}

void cmd_evaluate(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_model_input(s, "--model", o.model);
  const auto cache = s.input("--cache", o.cache);
  std::optional<fs::path> metrics_path;
  if (!o.out.empty()) metrics_path = s.primary_output("--out", o.out);
  const auto report = xg::evaluate(model, data::read_shot_cache(cache));
  const json metrics = metrics_json(report);
  if (metrics_path) {
    s.set_config({{"model", o.model}, {"cache", cache.string()}});
    s.prepare();
    write_json(*metrics_path, metrics);
  }
  out << metrics.dump() << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimInputs {
  json cfg;
  xg::XgModel model;
  ShotDataset dataset;
};

SimInputs sim_inputs(Session& s, const json& cfg, bool need_model) {
  SimInputs in;
  in.cfg = cfg;
  if (need_model) {
    const auto model = get_string(cfg, "model", "");
    if (model.empty()) throw ConfigError("--model: required (a model file or 'reference')");
    in.model = load_model_input(s, "--model", model);
  }
  in.dataset = data::read_shot_cache(s.input("--cache", get_string(cfg, "cache", "")));
  if (in.dataset.shots.empty()) throw DataError("shot cache holds no shots");
  return in;
}

void cmd_simulate_h1(Session& s, const json& cfg, unsigned threads, std::ostream& out) {
  const auto seed = require_seed(cfg);
  const auto alphas = get_doubles(cfg, "alphas", kDefaultAlphas);
  const auto ns = get_sizes(cfg, "shots", kDefaultShots);
  const auto reps = get_size(cfg, "reps", 10000);
  if (reps == 0) throw ConfigError("reps: must be positive");
  auto in = sim_inputs(s, cfg, true);
  const auto path = s.primary_output("--out", get_string(cfg, "out", ""));
  s.set_config({{"model", cfg["model"]}, {"cache", cfg["cache"]}, {"alphas", alphas},
                {"shots", ns}, {"reps", reps}, {"seed", seed}});
  s.prepare();
  const auto dist = sampler::build_distribution(in.dataset.shots);
  const auto result = sim::run_h1(in.model, dist, alphas, ns, reps, seed, threads);
  report::write_h1_csv(path, result);
  out << fmt::format("h1: {} cells x {} reps -> {}\n", result.cells.size(), reps, path.string());
}

void cmd_simulate_profiles(Session& s, const json& cfg, unsigned threads, std::ostream& out) {
  const auto seed = require_seed(cfg);
  const auto alphas = get_doubles(cfg, "alphas", kDefaultAlphas);
  const auto ns = get_sizes(cfg, "shots", kDefaultShots);
  const auto reps = get_size(cfg, "reps", 10000);
  const auto players = get_doubles(cfg, "players", {});
  if (players.empty()) throw ConfigError("players: at least one player id is required");
  auto in = sim_inputs(s, cfg, true);
  const auto path = s.primary_output("--out", get_string(cfg, "out", ""));
  s.set_config({{"model", cfg["model"]}, {"cache", cfg["cache"]}, {"alphas", alphas},
                {"shots", ns}, {"reps", reps}, {"seed", seed}, {"players", players}});
  s.prepare();
  std::map<Id, std::vector<ShotRecord>> sets;
  for (double p : players) sets[static_cast<Id>(p)] = in.dataset.only_player(static_cast<Id>(p)).shots;
  const auto global = sampler::build_distribution(in.dataset.shots);
  const auto result = sim::run_player_profiles(in.model, global, sets, alphas, ns, reps, seed, threads);
  report::write_profiles_csv(path, result);
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << fmt::format("profiles: {} players -> {}\n", result.players.size(), path.string());
}

void cmd_simulate_h3a(Session& s, const json& cfg, unsigned threads, std::ostream& out) {
  sim::AugmentationConfig config;
  config.seed = require_seed(cfg);
  config.threads = threads;
  config.alphas = get_doubles(cfg, "alphas", config.alphas);
  config.m_values = get_sizes(cfg, "m_values", config.m_values);
  config.runs = get_size(cfg, "runs", config.runs);
  config.train.penalty_c = get_double(cfg, "penalty_c", 1.0);
  if (!cfg.contains("player")) throw ConfigError("player: required");
  const Id player = cfg["player"].is_number_integer() ? cfg["player"].get<Id>()
                                                      : parse_i64(get_string(cfg, "player", ""), "player");
  auto in = sim_inputs(s, cfg, false);
  ShotDataset target_source = in.dataset;
  const auto target_cache = get_string(cfg, "target_cache", "");
  if (!target_cache.empty()) target_source = data::read_shot_cache(s.input("--target-cache", target_cache));
  const auto path = s.primary_output("--out", get_string(cfg, "out", ""));
  s.set_config({{"cache", cfg["cache"]}, {"target_cache", target_cache}, {"player", player},
                {"alphas", config.alphas}, {"m_values", config.m_values}, {"runs", config.runs},
                {"penalty_c", config.train.penalty_c}, {"seed", config.seed}});
  const auto base = in.dataset.without_player(player);
  const auto target = target_source.only_player(player);
  if (target.shots.empty()) throw DataError(fmt::format("player {} has no shots", player));
  s.prepare();
  const auto dist = sampler::build_distribution(base.shots);
  const auto result = sim::run_training_augmentation(xg::make_training_data(base), target, dist, config);
  report::write_augmentation_csv(path, result);
  out << fmt::format("h3a: base GAX {:.2f} over {} target shots -> {}\n", result.base_gax,
                     target.shots.size(), path.string());
}

void cmd_simulate_h3b(Session& s, const json& cfg, unsigned threads, std::ostream& out) {
  sim::MixtureConfig config;
  config.seed = require_seed(cfg);
  config.threads = threads;
  config.allocations = get_allocations(cfg, "allocations", config.allocations);
  config.alpha_levels = get_doubles(cfg, "alpha_levels", config.alpha_levels);
  config.test_alphas = get_doubles(cfg, "test_alphas", config.test_alphas);
  config.test_ns = get_sizes(cfg, "test_ns", config.test_ns);
  const bool full = get_bool(cfg, "full", false);
  config.train_size = get_size(cfg, "train_size", full ? 1'000'000 : 100'000);
  config.reps = get_size(cfg, "reps", config.reps);
  config.train.penalty_c = get_double(cfg, "penalty_c", 1.0);
  auto in = sim_inputs(s, cfg, true);
  const auto path = s.primary_output("--out", get_string(cfg, "out", ""));
  const auto models_path = s.sibling(".models.json");
  s.set_config({{"model", cfg["model"]}, {"cache", cfg["cache"]},
                {"allocations", config.allocations}, {"alpha_levels", config.alpha_levels},
                {"test_alphas", config.test_alphas}, {"test_ns", config.test_ns},
                {"train_size", config.train_size}, {"reps", config.reps},
                {"penalty_c", config.train.penalty_c}, {"seed", config.seed}});
  s.prepare();
  const auto dist = sampler::build_distribution(in.dataset.shots);
  const auto result = sim::run_skill_mixture(in.model, dist, config);
  report::write_mixture_csv(path, result);
  json models = json::array();
  for (const auto& a : result.allocations) {
    models.push_back({{"counts", a.counts}, {"model", xg::to_json(a.model)}});
  }
  write_json(models_path, models);
  out << fmt::format("h3b: {} allocations -> {}\n", result.allocations.size(), path.string());
}

// ---------------------------------------------------------------- finishing

void cmd_finishing(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_model_input(s, "--model", o.model);
  const auto dataset = data::read_shot_cache(s.input("--cache", o.cache));
  const auto filter = goals::parse_filter(o.filters);
  std::optional<Id> player;
  if (!o.player.empty()) player = parse_i64(o.player, "--player");
  const auto path = s.primary_output("--out", o.out);
  const auto summary_path = s.sibling(".summary.json");
  s.set_config({{"model", o.model}, {"cache", o.cache}, {"player", player ? json(*player) : json()},
                {"filters", o.filters}});

  const auto shots = player ? dataset.only_player(*player) : dataset;
  if (shots.shots.empty()) throw DataError("no shots for the requested player");
  std::vector<goals::ScoredRecord> scored;
  for (const auto& shot : shots.shots) scored.push_back({shot, model.predict(xg::extract_features(shot))});
  const auto filtered = goals::filter_shots(scored, filter);
  std::vector<double> xgs;
  std::size_t observed = 0;
  for (const auto& r : filtered.shots) {
    xgs.push_back(r.xg);
    observed += r.shot.is_goal ? 1 : 0;
  }
  const auto dist = goals::poisson_binomial(xgs);
  const auto tails = goals::tail_probabilities(dist, observed);
  s.prepare();
  report::write_pmf_csv(path, dist);
  const auto& rep = filtered.report;
  write_json(summary_path, {{"n", dist.n_shots},
                            {"total_xg", dist.total_xg},
                            {"observed", observed},
                            {"p_at_most", tails.p_at_most},
                            {"p_at_least", tails.p_at_least},
                            {"filters", o.filters},
                            {"removed", {{"deflected", rep.removed_deflected},
                                         {"body_part", rep.removed_body_part},
                                         {"distance", rep.removed_distance},
                                         {"custom", rep.removed_custom}}}});
  out << fmt::format("{} shots, {} goals, xG {:.2f}; P(<= observed) {:.4f}, P(>= observed) {:.4f}\n",
                     dist.n_shots, observed, dist.total_xg, tails.p_at_most, tails.p_at_least);
}

// ---------------------------------------------------------------- calibration

void cmd_calibration(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_model_input(s, "--model", o.model);
  const auto dataset = data::read_shot_cache(s.input("--cache", o.cache));
  if (o.group_by != "none" && o.group_by != "volume" && o.group_by != "position" &&
      o.group_by != "team") {
    throw ConfigError("--group-by: expected none, volume, position or team");
  }
  const auto thresholds = thresholds_for(o, dataset);
  const auto path = s.primary_output("--out", o.out);
  const auto keys = subgroups::group_shots(dataset, thresholds);
  auto preds = xg::predict_all(model, dataset);
  const auto labels = labels_of(dataset);

  std::map<std::string, std::vector<std::size_t>> members;
  if (o.group_by != "none") {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      std::string name;
      if (o.group_by == "volume") name = subgroups::to_string(keys[i].volume);
      else if (o.group_by == "position") name = to_string(keys[i].position);
      else name = to_string(keys[i].team);
      members[name].push_back(i);
    }
  }
  std::map<std::string, fs::path> group_paths;
  for (const auto& [name, idx] : members) group_paths[name] = s.sibling("." + name + ".csv");
  const auto conversion_path = s.sibling(".conversion.csv");
  s.set_config({{"model", o.model}, {"cache", o.cache}, {"group_by", o.group_by},
                {"volume_thresholds", {thresholds.low, thresholds.high}},
                {"min_bin_n", o.min_bin_n}, {"bandwidth", o.bandwidth}});
  s.prepare();
  report::write_calibration_csv(path, subgroups::calibration_curve(preds, labels, o.min_bin_n, o.bandwidth));
  for (const auto& [name, idx] : members) {
    std::vector<double> p;
    std::vector<std::uint8_t> y;
    for (std::size_t i : idx) {
      p.push_back(preds[i]);
      y.push_back(labels[i]);
    }
    report::write_calibration_csv(group_paths[name],
                                  subgroups::calibration_curve(p, y, o.min_bin_n, o.bandwidth));
  }
  report::write_conversion_csv(conversion_path, subgroups::conversion_by_distance(dataset, keys));
  out << fmt::format("calibration over {} shots, {} groups -> {}\n", dataset.shots.size(),
                     members.size(), path.string());
}

// ---------------------------------------------------------------- multicalib

mcal::MultiCalibratedModel load_mc(Session& s, const Options& o) {
  return mcal::load_multicalibrated(s.input("--mc", o.mc));
}

void cmd_mc_fit(Session& s, const Options& o, std::ostream& out) {
  const auto base = load_model_input(s, "--model", o.model);
  const auto dataset = data::read_shot_cache(s.input("--cache", o.cache));
  const auto thresholds = thresholds_for(o, dataset);
  const auto path = s.primary_output("--out", o.out);
  const auto trace_path = s.sibling(".trace.csv");
  s.set_config({{"model", o.model}, {"cache", o.cache}, {"tolerance", o.tolerance},
                {"max_iter", o.max_iter}, {"min_support", o.min_support},
                {"volume_thresholds", {thresholds.low, thresholds.high}}});
  const auto keys = subgroups::group_shots(dataset, thresholds);
  const auto features = features_of(dataset);
  const auto labels = labels_of(dataset);
  std::vector<mcal::IterationTrace> trace;
  const auto model = mcal::fit_multicalibration(base, features, labels, keys,
                                                mcal::position_volume_groups(), mcal::BinSchema(),
                                                {o.tolerance, o.max_iter, o.min_support}, &trace);
  s.prepare();
  mcal::save_multicalibrated(path, model);
  std::ofstream t(trace_path, std::ios::binary);
  csv::write_row(t, {"iteration", "group", "bin", "support", "violation_before", "violation_after"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    csv::write_row(t, {std::to_string(i + 1), model.groups()[r.group_index].describe(),
                       std::to_string(r.bin_index), std::to_string(r.support),
                       report::format_number(r.violation_before),
                       report::format_number(r.violation_after)});
  }
  t.close();
  if (!model.converged()) {
    throw NumericalError(fmt::format("multi-calibration did not converge within {} iterations",
                                     o.max_iter));
  }
  out << fmt::format("multi-calibration converged after {} updates -> {}\n", model.updates().size(),
                     path.string());
}

void cmd_mc_predict(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_mc(s, o);
  const auto dataset = data::read_shot_cache(s.input("--cache", o.cache));
  const auto thresholds = thresholds_for(o, dataset);
  const auto path = s.primary_output("--out", o.out);
  s.set_config({{"mc", o.mc}, {"cache", o.cache},
                {"volume_thresholds", {thresholds.low, thresholds.high}}});
  const auto keys = subgroups::group_shots(dataset, thresholds);
  s.prepare();
  std::ofstream file(path, std::ios::binary);
  csv::write_row(file, {"shot_id", "player_id", "group", "standard_xg", "multicalibrated_xg"});
  for (std::size_t i = 0; i < dataset.shots.size(); ++i) {
    const auto& shot = dataset.shots[i];
    const auto f = xg::extract_features(shot);
    csv::write_row(file, {shot.shot_id, std::to_string(shot.player_id), subgroups::describe(keys[i]),
                          report::format_number(model.base().predict(f)),
                          report::format_number(model.predict(f, keys[i]))});
  }
  out << fmt::format("scored {} shots -> {}\n", dataset.shots.size(), path.string());
}

void cmd_mc_baselines(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_mc(s, o);
  const auto population = data::read_shot_cache(s.input("--cache", o.cache));
  ShotDataset target = o.shots_cache.empty() ? population
                                             : data::read_shot_cache(s.input("--shots", o.shots_cache));
  std::optional<Id> player;
  if (!o.player.empty()) {
    player = parse_i64(o.player, "--player");
    target = target.only_player(*player);
  }
  if (target.shots.empty()) throw DataError("no target shots for the baselines");
  mcal::WeightBasis basis;
  if (o.weights == "players") basis = mcal::WeightBasis::kPlayers;
  else if (o.weights == "shots") basis = mcal::WeightBasis::kShots;
  else throw ConfigError("--weights: expected players or shots");
  const auto thresholds = thresholds_for(o, population);
  const auto path = s.primary_output("--out", o.out);
  const auto summary_path = s.sibling(".summary.json");
  s.set_config({{"mc", o.mc}, {"cache", o.cache}, {"shots", o.shots_cache},
                {"player", player ? json(*player) : json()}, {"weights", o.weights},
                {"volume_thresholds", {thresholds.low, thresholds.high}}});
  const auto keys = subgroups::group_shots(population, thresholds);
  auto weights = mcal::group_weights(model, population, keys, basis);
  const auto report = mcal::baseline_report(model, target, weights, basis);
  s.prepare();
  report::write_baseline_matrix_csv(path, model, report);
  write_json(summary_path, report::baseline_summary(model, report));
  out << fmt::format("{} shots, {} goals: standard xG {:.2f}, weighted-average xG {:.2f}\n",
                     report.n_shots, report.goals, report.standard_xg, report.weighted_average_xg);
}

void cmd_mc_leaderboard(Session& s, const Options& o, std::ostream& out) {
  const auto model = load_mc(s, o);
  const auto cache = s.input("--cache", o.cache);
  const auto dataset = data::read_shot_cache(cache);
  std::map<std::string, double> provider;
  if (fs::is_regular_file(data::provider_xg_sidecar(cache))) {
    s.input("--cache", data::provider_xg_sidecar(cache));
    provider = data::read_provider_xg(cache);
  }
  const auto thresholds = thresholds_for(o, dataset);
  const auto path = s.primary_output("--out", o.out);
  const auto summary_path = s.sibling(".summary.json");
  s.set_config({{"mc", o.mc}, {"cache", o.cache}, {"min_goals", o.min_goals},
                {"volume_thresholds", {thresholds.low, thresholds.high}}});
  const auto keys = subgroups::group_shots(dataset, thresholds);
  const auto board = mcal::gax_leaderboard(dataset, keys, model, provider, o.min_goals);
  s.prepare();
  report::write_leaderboard_csv(path, board);
  write_json(summary_path, report::leaderboard_summary(board));
  out << fmt::format("{} players with at least {} goals -> {}\n", board.rows.size(), o.min_goals,
                     path.string());
}

// ---------------------------------------------------------------- figure

void cmd_figure(Session& s, const Options& o, std::ostream& out) {
  if (o.list_figures) {
    for (const auto& id : report::figure_ids()) out << id << '\n';
    return;
  }
  if (o.figure_id.empty()) throw ConfigError("--id: required (use --list to see figure ids)");
  report::figure_columns(o.figure_id);
  std::vector<fs::path> inputs;
  for (const auto& in : o.figure_inputs) inputs.push_back(s.input("--in", in));
  const auto path = s.primary_output("--out", o.out);
  s.set_config({{"id", o.figure_id}, {"inputs", o.figure_inputs}});
  s.prepare();
  report::emit_figure_data(o.figure_id, inputs, path);
  out << fmt::format("figure {} -> {}\n", o.figure_id, path.string());
}

// ---------------------------------------------------------------- dispatch

std::string kind_of(int code) {
  switch (code) {
    case kExitConfig: return "config";
    case kExitData: return "data";
    case kExitNumerical: return "numerical";
    default: return "internal";
  }
}

void error_record(std::ostream& err, int code, const std::string& message, const Session* s) {
  json record{{"error", {{"kind", kind_of(code)}, {"exit_code", code}, {"message", message}}}};
  if (s != nullptr && s->prepared()) record["error"]["manifest"] = s->manifest_path().string();
  err << record.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected-goals bias toolkit", "xgbias"};
  app.require_subcommand(1);
  app.set_version_flag("--version", report::kToolVersion);
  Options o;
  auto threads_opt = [&o](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
  };

  auto* ingest = app.add_subcommand("ingest", "Parse event data into a shot cache");
  ingest->add_option("--events-dir", o.events_dir, "Open-data root (default: $XGBIAS_DATA_DIR)");
  ingest->add_option("--elo", o.elo, "Club-Elo CSV export")->required();
  ingest->add_option("--out", o.out, "Shot cache CSV")->required();
  ingest->add_option("--elo-date", o.elo_date, "Rating date (default: earliest match date)");
  ingest->add_option("--alignment", o.alignment, "provider_name,elo_name CSV");
  ingest->add_option("--competitions", o.competitions, "Competition ids, comma separated");
  ingest->add_option("--seasons", o.seasons, "Season ids or names such as 2015/2016");
  ingest->add_option("--player-id", o.player_id, "Keep one shooter only");
  ingest->add_flag("--include-set-pieces", o.include_set_pieces, "Keep penalties and free kicks");
  threads_opt(ingest);

  auto* train = app.add_subcommand("train", "Fit the logistic xG model");
  train->add_option("--cache", o.cache, "Shot cache")->required();
  train->add_option("--seed", o.seed, "Split seed");
  train->add_option("--out", o.out, "Model JSON")->required();
  train->add_option("--test-fraction", o.test_fraction, "Held-out share");
  train->add_option("--penalty-c", o.penalty_c, "Inverse L2 strength");

  auto* evaluate = app.add_subcommand("evaluate", "AUROC and Brier score of a model");
  evaluate->add_option("--model", o.model, "Model JSON or 'reference'")->required();
  evaluate->add_option("--cache", o.cache, "Shot cache")->required();
  evaluate->add_option("--out", o.out, "Metrics JSON");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiments");
  simulate->require_subcommand(1);
  std::map<std::string, ConfigFlags> sim_flags;
  auto sim_sub = [&](const std::string& name, const std::string& help) {
    auto* sub = simulate->add_subcommand(name, help);
    auto& f = sim_flags[name];
    sub->add_option("--config", o.config, "TOML config; flags override its values");
    f.add(sub, "--cache", "cache", "Shot cache for the spatial distribution");
    f.add(sub, "--seed", "seed", "Master seed");
    f.add(sub, "--out", "out", "Result CSV");
    threads_opt(sub);
    return sub;
  };
  auto* h1 = sim_sub("h1", "Overperformance probability over skill and shot volume");
  sim_flags["h1"].add(h1, "--model", "model", "Model JSON or 'reference'");
  sim_flags["h1"].add(h1, "--alphas", "alphas", "Skill levels in percent");
  sim_flags["h1"].add(h1, "--shots", "shots", "Shots per season");
  sim_flags["h1"].add(h1, "--reps", "reps", "Repetitions per cell");
  auto* profiles = sim_sub("profiles", "Player shot-location profiles against the global one");
  sim_flags["profiles"].add(profiles, "--model", "model", "Model JSON or 'reference'");
  sim_flags["profiles"].add(profiles, "--players", "players", "Player ids");
  sim_flags["profiles"].add(profiles, "--alphas", "alphas", "Skill levels in percent");
  sim_flags["profiles"].add(profiles, "--shots", "shots", "Shots per season");
  sim_flags["profiles"].add(profiles, "--reps", "reps", "Repetitions per cell");
  auto* h3a = sim_sub("h3a", "Retraining with added skilled shots");
  sim_flags["h3a"].add(h3a, "--player", "player", "Target player id");
  sim_flags["h3a"].add(h3a, "--target-cache", "target_cache", "Cache with the target's shots");
  sim_flags["h3a"].add(h3a, "--alphas", "alphas", "Skill levels of the added shots");
  sim_flags["h3a"].add(h3a, "--m-values", "m_values", "Numbers of added shots");
  sim_flags["h3a"].add(h3a, "--runs", "runs", "Runs per point");
  sim_flags["h3a"].add(h3a, "--penalty-c", "penalty_c", "Inverse L2 strength");
  auto* h3b = sim_sub("h3b", "Skill mixtures in the training set");
  sim_flags["h3b"].add(h3b, "--model", "model", "Generating model JSON or 'reference'");
  sim_flags["h3b"].add(h3b, "--allocations", "allocations", "a:b:c:d;a:b:c:d;...");
  sim_flags["h3b"].add(h3b, "--alpha-levels", "alpha_levels", "Skill levels of the allocations");
  sim_flags["h3b"].add(h3b, "--test-alphas", "test_alphas", "Skill levels of test players");
  sim_flags["h3b"].add(h3b, "--test-ns", "test_ns", "Test season sizes");
  sim_flags["h3b"].add(h3b, "--train-size", "train_size", "Training shots per allocation");
  sim_flags["h3b"].add(h3b, "--reps", "reps", "Test seasons per cell");
  sim_flags["h3b"].add(h3b, "--full", "full", "true for 1,000,000 training shots");
  sim_flags["h3b"].add(h3b, "--penalty-c", "penalty_c", "Inverse L2 strength");

  auto* finishing = app.add_subcommand("finishing", "Exact goal distribution of a shot set");
  finishing->add_option("--player", o.player, "Player id (default: every shot)");
  finishing->add_option("--model", o.model, "Model JSON or 'reference'")->required();
  finishing->add_option("--cache", o.cache, "Shot cache")->required();
  finishing->add_option("--filters", o.filters, "e.g. deflected=exclude,band=25-35yd,body=foot");
  finishing->add_option("--out", o.out, "PMF CSV")->required();

  auto* calibration = app.add_subcommand("calibration", "Calibration curves by subgroup");
  calibration->add_option("--cache", o.cache, "Shot cache")->required();
  calibration->add_option("--model", o.model, "Model JSON or 'reference'")->required();
  calibration->add_option("--group-by", o.group_by, "none, volume, position or team");
  calibration->add_option("--volume-thresholds", o.volume_thresholds, "fixed (0.875, 2.526) or data (20th/80th percentiles)");
  calibration->add_option("--min-bin-n", o.min_bin_n, "Minimum shots per plotted bin");
  calibration->add_option("--bandwidth", o.bandwidth, "Gaussian smoothing bandwidth");
  calibration->add_option("--out", o.out, "Curve CSV")->required();

  auto* mc = app.add_subcommand("multicalib", "Multi-calibrated xG");
  mc->require_subcommand(1);
  auto* mc_fit = mc->add_subcommand("fit", "Fit multi-calibration updates");
  mc_fit->add_option("--model", o.model, "Base model JSON or 'reference'")->required();
  mc_fit->add_option("--cache", o.cache, "Fitting shots")->required();
  mc_fit->add_option("--tolerance", o.tolerance, "Allowed |prediction - conversion|");
  mc_fit->add_option("--max-iter", o.max_iter, "Update budget");
  mc_fit->add_option("--min-support", o.min_support, "Minimum shots per cell");
  mc_fit->add_option("--volume-thresholds", o.volume_thresholds, "fixed (0.875, 2.526) or data (20th/80th percentiles)");
  mc_fit->add_option("--out", o.out, "Multi-calibrated model JSON")->required();
  auto* mc_predict = mc->add_subcommand("predict", "Score shots");
  mc_predict->add_option("--mc", o.mc, "Multi-calibrated model JSON")->required();
  mc_predict->add_option("--cache", o.cache, "Shot cache")->required();
  mc_predict->add_option("--volume-thresholds", o.volume_thresholds, "fixed (0.875, 2.526) or data (20th/80th percentiles)");
  mc_predict->add_option("--out", o.out, "Predictions CSV")->required();
  auto* mc_base = mc->add_subcommand("baselines", "Average-player baselines for a shot set");
  mc_base->add_option("--mc", o.mc, "Multi-calibrated model JSON")->required();
  mc_base->add_option("--cache", o.cache, "Population for the group weights")->required();
  mc_base->add_option("--shots", o.shots_cache, "Cache with the target shots (default: --cache)");
  mc_base->add_option("--player", o.player, "Target player id");
  mc_base->add_option("--weights", o.weights, "players or shots");
  mc_base->add_option("--volume-thresholds", o.volume_thresholds, "fixed (0.875, 2.526) or data (20th/80th percentiles)");
  mc_base->add_option("--out", o.out, "3x3 matrix CSV")->required();
  auto* mc_board = mc->add_subcommand("leaderboard", "GAX leaderboard");
  mc_board->add_option("--mc", o.mc, "Multi-calibrated model JSON")->required();
  mc_board->add_option("--cache", o.cache, "Season shot cache")->required();
  mc_board->add_option("--min-goals", o.min_goals, "Minimum goals to be listed");
  mc_board->add_option("--volume-thresholds", o.volume_thresholds, "fixed (0.875, 2.526) or data (20th/80th percentiles)");
  mc_board->add_option("--out", o.out, "Leaderboard CSV")->required();

  auto* figure = app.add_subcommand("figure", "Plot-ready tables from result files");
  figure->add_option("--id", o.figure_id, "Figure id");
  figure->add_option("--in", o.figure_inputs, "Result file(s)");
  figure->add_option("--out", o.out, "Table CSV");
  figure->add_flag("--list", o.list_figures, "Print the available figure ids");

  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("--manifest", o.manifest, "Manifest JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << report::kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, kExitConfig, e.what(), nullptr);
    return kExitConfig;
  }

  std::string command;
  for (auto* sub = &app; !sub->get_subcommands().empty();) {
    sub = sub->get_subcommands().front();
    command += (command.empty() ? "" : " ") + sub->get_name();
  }
  Session session(command, args);
  try {
    if (command == "ingest") cmd_ingest(session, o, out);
    else if (command == "train") cmd_train(session, o, out);
    else if (command == "evaluate") cmd_evaluate(session, o, out);
    else if (command.rfind("simulate ", 0) == 0) {
      const std::string which = command.substr(9);
      const json cfg = sim_flags.at(which).merge(o.config);
      if (!o.config.empty()) session.input("--config", o.config);
      if (which == "h1") cmd_simulate_h1(session, cfg, o.threads, out);
      else if (which == "profiles") cmd_simulate_profiles(session, cfg, o.threads, out);
      else if (which == "h3a") cmd_simulate_h3a(session, cfg, o.threads, out);
      else cmd_simulate_h3b(session, cfg, o.threads, out);
    } else if (command == "finishing") cmd_finishing(session, o, out);
    else if (command == "calibration") cmd_calibration(session, o, out);
    else if (command == "multicalib fit") cmd_mc_fit(session, o, out);
    else if (command == "multicalib predict") cmd_mc_predict(session, o, out);
    else if (command == "multicalib baselines") cmd_mc_baselines(session, o, out);
    else if (command == "multicalib leaderboard") cmd_mc_leaderboard(session, o, out);
    else if (command == "figure") cmd_figure(session, o, out);
    else if (command == "replay") {
      const auto manifest = report::load_manifest(o.manifest);
      const auto changed = report::changed_inputs(manifest);
      if (!changed.empty()) {
        std::string list;
        for (const auto& c : changed) list += (list.empty() ? "" : ", ") + c;
        throw DataError("inputs changed since the manifest was written: " + list);
      }
      return run(manifest.argv, out, err);
    }
    session.finish();
    return kExitOk;
  } catch (const ConfigError& e) {
    error_record(err, kExitConfig, e.what(), nullptr);
    return kExitConfig;
  } catch (const DataError& e) {
    error_record(err, kExitData, e.what(), nullptr);
    return kExitData;
  } catch (const NumericalError& e) {
    session.finish("partial");
    error_record(err, kExitNumerical, e.what(), &session);
    return kExitNumerical;
  } catch (const std::exception& e) {
    error_record(err, kExitFailure, e.what(), nullptr);
    return kExitFailure;
  }
}

}  // namespace xgbias::cli
