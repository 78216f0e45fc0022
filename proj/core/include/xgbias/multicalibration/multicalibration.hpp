#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xgbias/subgroups/subgroups.hpp"
#include "xgbias/xg_core/logistic.hpp"

namespace xgbias::mcal {

using subgroups::SubgroupKey;
using subgroups::VolumeTier;

// Calibration bins over [0,1]: [e_i, e_{i+1}) with the last bin closed.
class BinSchema {
 public:
  // Log-spaced default edges.
  BinSchema();
  // Throws ConfigError unless strictly increasing from 0 to 1.
  explicit BinSchema(std::vector<double> edges);

  const std::vector<double>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size() - 1; }
  std::size_t bin_of(double p) const;

 private:
  std::vector<double> edges_;
};

// Subgroup predicate; an empty field matches anything.
struct GroupPattern {
  std::optional<VolumeTier> volume;
  std::optional<Position> position;
  std::optional<TeamTier> team;

  bool matches(const SubgroupKey& key) const;
  std::string describe() const;
  bool operator==(const GroupPattern&) const = default;
};

// Position x volume cells, team strength left open: defender, midfielder,
// attacker, each low/mid/high.
std::vector<GroupPattern> position_volume_groups();

struct CalibrationUpdate {
  std::size_t group_index = 0;
  std::size_t bin_index = 0;
  double delta = 0.0;
  int iteration = 0;
};

inline constexpr double kMinPrediction = 0.001;
inline constexpr double kMaxPrediction = 0.999;

struct FitOptions {
  double tolerance = 0.01;
  int max_iterations = 100;
  std::size_t min_support = 100;
};

// Per-iteration diagnostics: violation of the targeted cell before and after
// its update, measured on the same member set.
struct IterationTrace {
  std::size_t group_index = 0;
  std::size_t bin_index = 0;
  std::size_t support = 0;
  double violation_before = 0.0;
  double violation_after = 0.0;
};

class MultiCalibratedModel {
 public:
  MultiCalibratedModel(xg::XgModel base, std::vector<GroupPattern> groups, BinSchema schema,
                       FitOptions options);

  const xg::XgModel& base() const { return base_; }
  const std::vector<GroupPattern>& groups() const { return groups_; }
  const std::vector<CalibrationUpdate>& updates() const { return updates_; }
  const BinSchema& schema() const { return schema_; }
  const FitOptions& options() const { return options_; }
  bool converged() const { return converged_; }

  // Base prediction followed by every recorded update, in order, that
  // applies to `key`. Pure.
  double predict(const xg::FeatureVector& f, const SubgroupKey& key) const;

  // Replays updates as though the shooter belonged to `baseline`. Throws
  // ConfigError if no fitted group matches the baseline.
  double predict_as_group(const xg::FeatureVector& f, const SubgroupKey& baseline) const;

  // Index of the first fitted group matching `key`, if any.
  std::optional<std::size_t> group_of(const SubgroupKey& key) const;

 private:
  friend MultiCalibratedModel fit_multicalibration(const xg::XgModel&,
                                                   std::span<const xg::FeatureVector>,
                                                   std::span<const std::uint8_t>,
                                                   std::span<const SubgroupKey>,
                                                   std::vector<GroupPattern>, BinSchema,
                                                   FitOptions, std::vector<IterationTrace>*);
  friend MultiCalibratedModel multicalibrated_from_json(const nlohmann::json&);

  double replay(double p, const SubgroupKey& key) const;

  xg::XgModel base_;
  std::vector<GroupPattern> groups_;
  BinSchema schema_;
  FitOptions options_;
  std::vector<CalibrationUpdate> updates_;
  bool converged_ = false;
};

// Worst-violation-first boosting: each iteration picks the (group, bin) cell
// with at least min_support shots whose |mean prediction - conversion| is
// largest and above tolerance (ties: lowest group, then lowest bin), and
// shifts every prediction in that cell by (conversion - mean prediction),
// clamped to [0.001, 0.999]. Stops when no cell violates the tolerance or
// after max_iterations. Throws DataError when no cell reaches min_support.
MultiCalibratedModel fit_multicalibration(const xg::XgModel& base,
                                          std::span<const xg::FeatureVector> features,
                                          std::span<const std::uint8_t> labels,
                                          std::span<const SubgroupKey> keys,
                                          std::vector<GroupPattern> groups = position_volume_groups(),
                                          BinSchema schema = BinSchema(), FitOptions options = {},
                                          std::vector<IterationTrace>* trace = nullptr);

struct CellStatus {
  std::size_t group_index = 0;
  std::size_t bin_index = 0;
  std::size_t n = 0;
  double mean_predicted = 0.0;
  double conversion_rate = 0.0;
  double violation() const { return conversion_rate - mean_predicted; }
};

// Every (group, bin) cell of `predictions` binned under `schema`.
std::vector<CellStatus> cell_status(std::span<const double> predictions,
                                    std::span<const std::uint8_t> labels,
                                    std::span<const SubgroupKey> keys,
                                    const std::vector<GroupPattern>& groups,
                                    const BinSchema& schema);

nlohmann::json to_json(const MultiCalibratedModel& model);
MultiCalibratedModel multicalibrated_from_json(const nlohmann::json& j);
void save_multicalibrated(const std::filesystem::path& path, const MultiCalibratedModel& model);
MultiCalibratedModel load_multicalibrated(const std::filesystem::path& path);

nlohmann::json to_json(const GroupPattern& pattern);
GroupPattern group_pattern_from_json(const nlohmann::json& j);

}  // namespace xgbias::mcal
