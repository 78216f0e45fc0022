#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xgbias/shot_data/types.hpp"
#include "xgbias/subgroups/subgroups.hpp"

namespace xgbias::subgroups {

inline constexpr std::size_t kCalibrationBins = 100;  // width 0.01 on [0,1]
inline constexpr std::size_t kMinBinShots = 100;
inline constexpr double kDefaultBandwidth = 0.02;

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::size_t goals = 0;
  double mean_predicted = 0.0;  // 0 for empty bins
  double conversion_rate = 0.0;
  bool masked = true;  // fewer than min_bin_n shots
  // Gaussian-kernel smoothed (mean prediction, conversion) at the bin center,
  // present for unmasked bins only.
  std::optional<double> smoothed_x;
  std::optional<double> smoothed_y;
};

struct CalibrationCurve {
  std::vector<CalibrationBin> bins;
  double bandwidth = kDefaultBandwidth;
  std::size_t min_bin_n = kMinBinShots;
  std::size_t total = 0;
};

// Bin of a probability: floor(100 p), with p = 1 in the last bin.
std::size_t calibration_bin(double p);

// Per-bin statistics plus a count-weighted Nadaraya-Watson smoother over the
// unmasked bin centers. Throws DataError on empty or mismatched input.
CalibrationCurve calibration_curve(std::span<const double> predictions,
                                   std::span<const std::uint8_t> outcomes,
                                   std::size_t min_bin_n = kMinBinShots,
                                   double bandwidth = kDefaultBandwidth);

// Distance bands in meters: [0,5), [5,11), [11,16), [16,25), [25,inf).
inline constexpr std::array<double, 5> kBandLowerEdges = {0.0, 5.0, 11.0, 16.0, 25.0};
inline constexpr std::size_t kNumBands = kBandLowerEdges.size();

std::size_t distance_band(double distance_m);

struct ConversionCell {
  std::size_t n = 0;
  std::size_t goals = 0;
  std::optional<double> rate() const {
    if (n == 0) return std::nullopt;
    return static_cast<double>(goals) / static_cast<double>(n);
  }
};

// Volume tier x {foot, head} x distance band. Shots with body part `other`
// are not tabulated.
struct ConversionTable {
  std::array<std::array<std::array<ConversionCell, kNumBands>, 2>, 3> cells{};

  const ConversionCell& at(VolumeTier v, BodyPart part, std::size_t band) const;
};

ConversionTable conversion_by_distance(const ShotDataset& dataset,
                                       std::span<const SubgroupKey> groups);

}  // namespace xgbias::subgroups
