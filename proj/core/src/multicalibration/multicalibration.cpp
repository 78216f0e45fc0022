#include "xgbias/multicalibration/multicalibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "xgbias/error.hpp"
#include "xgbias/xg_core/model_io.hpp"

namespace xgbias::mcal {
namespace {

double clamp_prediction(double p) { return std::clamp(p, kMinPrediction, kMaxPrediction); }

constexpr const char* kWildcard = "*";

}  // namespace

BinSchema::BinSchema()
    : BinSchema({0.00, 0.015, 0.023, 0.034, 0.052, 0.079, 0.12, 0.18, 0.27, 0.40, 1.00}) {}

BinSchema::BinSchema(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2 || edges_.front() != 0.0 || edges_.back() != 1.0) {
    throw ConfigError("bin edges must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) throw ConfigError("bin edges must be strictly increasing");
  }
}

std::size_t BinSchema::bin_of(double p) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), p);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges_.begin() - 1, 0));
  return std::min(idx, size() - 1);
}

bool GroupPattern::matches(const SubgroupKey& key) const {
  return (!volume || *volume == key.volume) && (!position || *position == key.position) &&
         (!team || *team == key.team);
}

std::string GroupPattern::describe() const {
  return std::string(position ? to_string(*position) : kWildcard) + "/" +
         std::string(volume ? subgroups::to_string(*volume) : kWildcard) + "/" +
         std::string(team ? to_string(*team) : kWildcard);
}

std::vector<GroupPattern> position_volume_groups() {
  std::vector<GroupPattern> out;
  for (Position p : {Position::kDefender, Position::kMidfielder, Position::kAttacker}) {
    for (VolumeTier v : {VolumeTier::kLow, VolumeTier::kMid, VolumeTier::kHigh}) {
      GroupPattern g;
      g.position = p;
      g.volume = v;
      out.push_back(g);
    }
  }
  return out;
}

MultiCalibratedModel::MultiCalibratedModel(xg::XgModel base, std::vector<GroupPattern> groups,
                                           BinSchema schema, FitOptions options)
    : base_(std::move(base)), groups_(std::move(groups)), schema_(std::move(schema)),
      options_(options) {
  if (groups_.empty()) throw ConfigError("multi-calibration needs at least one group");
}

double MultiCalibratedModel::replay(double p, const SubgroupKey& key) const {
  for (const auto& u : updates_) {
    if (groups_[u.group_index].matches(key) && schema_.bin_of(p) == u.bin_index) {
      p = clamp_prediction(p + u.delta);
    }
  }
  return p;
}

double MultiCalibratedModel::predict(const xg::FeatureVector& f, const SubgroupKey& key) const {
  return replay(base_.predict(f), key);
}

std::optional<std::size_t> MultiCalibratedModel::group_of(const SubgroupKey& key) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].matches(key)) return g;
  }
  return std::nullopt;
}

double MultiCalibratedModel::predict_as_group(const xg::FeatureVector& f,
                                              const SubgroupKey& baseline) const {
  if (!group_of(baseline)) {
    throw ConfigError("baseline " + subgroups::describe(baseline) + " is not a fitted group");
  }
  return predict(f, baseline);
}

std::vector<CellStatus> cell_status(std::span<const double> predictions,
                                    std::span<const std::uint8_t> labels,
                                    std::span<const SubgroupKey> keys,
                                    const std::vector<GroupPattern>& groups,
                                    const BinSchema& schema) {
  const std::size_t n_bins = schema.size();
  std::vector<CellStatus> cells(groups.size() * n_bins);
  std::vector<double> pred_sum(cells.size(), 0.0), goal_sum(cells.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      cells[g * n_bins + b].group_index = g;
      cells[g * n_bins + b].bin_index = b;
    }
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const std::size_t b = schema.bin_of(predictions[i]);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!groups[g].matches(keys[i])) continue;
      const std::size_t c = g * n_bins + b;
      ++cells[c].n;
      pred_sum[c] += predictions[i];
      goal_sum[c] += labels[i] ? 1.0 : 0.0;
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].n == 0) continue;
    const auto n = static_cast<double>(cells[c].n);
    cells[c].mean_predicted = pred_sum[c] / n;
    cells[c].conversion_rate = goal_sum[c] / n;
  }
  return cells;
}

MultiCalibratedModel fit_multicalibration(const xg::XgModel& base,
                                          std::span<const xg::FeatureVector> features,
                                          std::span<const std::uint8_t> labels,
                                          std::span<const SubgroupKey> keys,
                                          std::vector<GroupPattern> groups, BinSchema schema,
                                          FitOptions options, std::vector<IterationTrace>* trace) {
  if (features.size() != labels.size() || features.size() != keys.size()) {
    throw DataError("multi-calibration: features, labels and keys must align");
  }
  if (!(options.tolerance > 0.0) || options.max_iterations < 0) {
    throw ConfigError("multi-calibration: tolerance must be positive, iterations non-negative");
  }
  MultiCalibratedModel model(base, std::move(groups), std::move(schema), options);
  const auto& gs = model.groups_;
  const auto& sc = model.schema_;

  std::vector<double> preds(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) preds[i] = base.predict(features[i]);

  auto worst_cell = [&](const std::vector<CellStatus>& cells) -> const CellStatus* {
    const CellStatus* worst = nullptr;
    for (const auto& c : cells) {  // ordered by group, then bin
      if (c.n < options.min_support) continue;
      const double v = std::abs(c.violation());
      if (v > options.tolerance && (!worst || v > std::abs(worst->violation()))) worst = &c;
    }
    return worst;
  };

  {
    const auto cells = cell_status(preds, labels, keys, gs, sc);
    if (std::none_of(cells.begin(), cells.end(),
                     [&](const CellStatus& c) { return c.n >= options.min_support; })) {
      throw DataError("multi-calibration: no (group, bin) cell has " +
                      std::to_string(options.min_support) + " shots");
    }
  }

  model.converged_ = false;
  for (int iter = 0;; ++iter) {
    const auto cells = cell_status(preds, labels, keys, gs, sc);
    const CellStatus* worst = worst_cell(cells);
    if (!worst) {
      model.converged_ = true;
      break;
    }
    if (iter >= options.max_iterations) break;

    const CellStatus target = *worst;
    const double delta = target.violation();
    double after_sum = 0.0;
    double goal_sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (!gs[target.group_index].matches(keys[i]) || sc.bin_of(preds[i]) != target.bin_index) {
        continue;
      }
      preds[i] = clamp_prediction(preds[i] + delta);
      after_sum += preds[i];
      goal_sum += labels[i] ? 1.0 : 0.0;
    }
    model.updates_.push_back({target.group_index, target.bin_index, delta, iter});
    if (trace) {
      const auto n = static_cast<double>(target.n);
      trace->push_back({target.group_index, target.bin_index, target.n,
                        std::abs(target.violation()), std::abs(goal_sum / n - after_sum / n)});
    }
  }
  return model;
}

nlohmann::json to_json(const GroupPattern& pattern) {
  return {{"position", pattern.position ? std::string(to_string(*pattern.position)) : kWildcard},
          {"volume", pattern.volume ? std::string(subgroups::to_string(*pattern.volume)) : kWildcard},
          {"team", pattern.team ? std::string(to_string(*pattern.team)) : kWildcard}};
}

GroupPattern group_pattern_from_json(const nlohmann::json& j) {
  GroupPattern g;
  const auto position = j.value("position", std::string(kWildcard));
  const auto volume = j.value("volume", std::string(kWildcard));
  const auto team = j.value("team", std::string(kWildcard));
  if (position != kWildcard) g.position = parse_position(position);
  if (volume != kWildcard) g.volume = subgroups::parse_volume_tier(volume);
  if (team != kWildcard) g.team = parse_team_tier(team);
  return g;
}

nlohmann::json to_json(const MultiCalibratedModel& model) {
  nlohmann::json j;
  j["base_model"] = xg::to_json(model.base());
  j["bin_edges"] = model.schema().edges();
  j["groups"] = nlohmann::json::array();
  for (const auto& g : model.groups()) j["groups"].push_back(to_json(g));
  j["updates"] = nlohmann::json::array();
  for (const auto& u : model.updates()) {
    j["updates"].push_back({{"group", u.group_index},
                            {"group_pattern", to_json(model.groups()[u.group_index])},
                            {"bin", u.bin_index},
                            {"delta", u.delta},
                            {"iter", u.iteration}});
  }
  j["tolerance"] = model.options().tolerance;
  j["max_iter"] = model.options().max_iterations;
  j["min_support"] = model.options().min_support;
  j["converged"] = model.converged();
  return j;
}

MultiCalibratedModel multicalibrated_from_json(const nlohmann::json& j) {
  try {
    std::vector<GroupPattern> groups;
    for (const auto& g : j.at("groups")) groups.push_back(group_pattern_from_json(g));
    FitOptions options;
    options.tolerance = j.at("tolerance").get<double>();
    options.max_iterations = j.at("max_iter").get<int>();
    options.min_support = j.value("min_support", std::size_t{100});
    MultiCalibratedModel model(xg::model_from_json(j.at("base_model")), std::move(groups),
                               BinSchema(j.at("bin_edges").get<std::vector<double>>()), options);
    for (const auto& u : j.at("updates")) {
      CalibrationUpdate upd{u.at("group").get<std::size_t>(), u.at("bin").get<std::size_t>(),
                            u.at("delta").get<double>(), u.at("iter").get<int>()};
      if (upd.group_index >= model.groups_.size() || upd.bin_index >= model.schema_.size()) {
        throw DataError("multi-calibrated model: update references an unknown group or bin");
      }
      model.updates_.push_back(upd);
    }
    model.converged_ = j.at("converged").get<bool>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("multi-calibrated model: ") + e.what());
  }
}

void save_multicalibrated(const std::filesystem::path& path, const MultiCalibratedModel& model) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(model).dump(2) << '\n';
}

MultiCalibratedModel load_multicalibrated(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return multicalibrated_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace xgbias::mcal
