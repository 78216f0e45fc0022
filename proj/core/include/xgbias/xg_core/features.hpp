#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::xg {

// Metric pitch used for distance and angle. Raw provider coordinates still
// enter the model unscaled.
inline constexpr double kPitchLengthM = 105.0;
inline constexpr double kPitchWidthM = 68.0;
inline constexpr double kMetersPerProviderX = kPitchLengthM / kProviderLength;
inline constexpr double kMetersPerProviderY = kPitchWidthM / kProviderWidth;
inline constexpr double kMetersPerYard = 0.9144;

inline constexpr std::size_t kNumFeatures = 6;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "start_x", "start_y", "distance", "angle", "bodypart_head", "bodypart_other"};

struct FeatureVector {
  double start_x = 0.0;  // provider units
  double start_y = 0.0;  // provider units
  double distance = 0.0; // meters to the goal center
  double angle = 0.0;    // radians off the goal-center axis, [0, pi/2]
  double bodypart_head = 0.0;
  double bodypart_other = 0.0;

  std::array<double, kNumFeatures> as_array() const {
    return {start_x, start_y, distance, angle, bodypart_head, bodypart_other};
  }
};

// Distance in meters from a provider-frame location to the goal center.
double distance_to_goal(double start_x, double start_y);

// Bearing off the goal-center axis: atan(|lateral| / longitudinal), 0 at the
// goal center itself, pi/2 on the goal line.
double angle_to_goal(double start_x, double start_y);

// Throws DataError (naming the shot) for coordinates outside the frame.
FeatureVector extract_features(const ShotRecord& shot);

FeatureVector extract_features(double start_x, double start_y, BodyPart body_part);

}  // namespace xgbias::xg
