#include "xgbias/subgroups/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "xgbias/error.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::subgroups {

std::size_t calibration_bin(double p) {
  const auto b = static_cast<std::ptrdiff_t>(std::floor(p * static_cast<double>(kCalibrationBins)));
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, kCalibrationBins - 1));
}

CalibrationCurve calibration_curve(std::span<const double> predictions,
                                   std::span<const std::uint8_t> outcomes, std::size_t min_bin_n,
                                   double bandwidth) {
  if (predictions.size() != outcomes.size()) {
    throw DataError("calibration curve: prediction and outcome counts differ");
  }
  if (predictions.empty()) throw DataError("calibration curve: empty input");
  if (!(bandwidth > 0.0)) throw ConfigError("calibration curve: bandwidth must be positive");

  CalibrationCurve curve;
  curve.bandwidth = bandwidth;
  curve.min_bin_n = min_bin_n;
  curve.total = predictions.size();
  curve.bins.resize(kCalibrationBins);
  std::vector<double> pred_sum(kCalibrationBins, 0.0);
  for (std::size_t b = 0; b < kCalibrationBins; ++b) {
    curve.bins[b].lo = static_cast<double>(b) / kCalibrationBins;
    curve.bins[b].hi = static_cast<double>(b + 1) / kCalibrationBins;
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!(predictions[i] >= 0.0 && predictions[i] <= 1.0)) {
      throw DataError("calibration curve: prediction " + std::to_string(i) + " outside [0,1]");
    }
    const auto b = calibration_bin(predictions[i]);
    ++curve.bins[b].n;
    curve.bins[b].goals += outcomes[i] ? 1 : 0;
    pred_sum[b] += predictions[i];
  }
  for (std::size_t b = 0; b < kCalibrationBins; ++b) {
    auto& bin = curve.bins[b];
    if (bin.n > 0) {
      bin.mean_predicted = pred_sum[b] / static_cast<double>(bin.n);
      bin.conversion_rate = static_cast<double>(bin.goals) / static_cast<double>(bin.n);
    }
    bin.masked = bin.n < min_bin_n;
  }
  for (auto& target : curve.bins) {
    if (target.masked) continue;
    const double center = 0.5 * (target.lo + target.hi);
    double w_sum = 0.0, x_sum = 0.0, y_sum = 0.0;
    for (const auto& src : curve.bins) {
      if (src.masked) continue;
      const double z = (center - 0.5 * (src.lo + src.hi)) / bandwidth;
      const double w = static_cast<double>(src.n) * std::exp(-0.5 * z * z);
      w_sum += w;
      x_sum += w * src.mean_predicted;
      y_sum += w * src.conversion_rate;
    }
    target.smoothed_x = x_sum / w_sum;
    target.smoothed_y = y_sum / w_sum;
  }
  return curve;
}

std::size_t distance_band(double distance_m) {
  std::size_t band = 0;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    if (distance_m >= kBandLowerEdges[b]) band = b;
  }
  return band;
}

const ConversionCell& ConversionTable::at(VolumeTier v, BodyPart part, std::size_t band) const {
  if (part == BodyPart::kOther) throw DataError("conversion table has no 'other' body part");
  return cells[static_cast<std::size_t>(v)][part == BodyPart::kHead ? 1 : 0][band];
}

ConversionTable conversion_by_distance(const ShotDataset& dataset,
                                       std::span<const SubgroupKey> groups) {
  if (groups.size() != dataset.shots.size()) {
    throw DataError("conversion table: one subgroup key per shot required");
  }
  ConversionTable table;
  for (std::size_t i = 0; i < dataset.shots.size(); ++i) {
    const auto& s = dataset.shots[i];
    if (s.body_part == BodyPart::kOther) continue;
    const auto band = distance_band(xg::distance_to_goal(s.start_x, s.start_y));
    auto& cell = table.cells[static_cast<std::size_t>(groups[i].volume)]
                            [s.body_part == BodyPart::kHead ? 1 : 0][band];
    ++cell.n;
    cell.goals += s.is_goal ? 1 : 0;
  }
  return table;
}

}  // namespace xgbias::subgroups
