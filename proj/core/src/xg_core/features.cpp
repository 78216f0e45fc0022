#include "xgbias/xg_core/features.hpp"

#include <cmath>

#include "xgbias/error.hpp"

namespace xgbias::xg {
namespace {

constexpr double kGoalX = kProviderLength;
constexpr double kGoalY = kProviderWidth / 2.0;

void check_frame(double x, double y, const std::string& what) {
  if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || x > kProviderLength || y < 0.0 ||
      y > kProviderWidth) {
    throw DataError(what + ": location (" + std::to_string(x) + ", " + std::to_string(y) +
                    ") outside the 120x80 frame");
  }
}

}  // namespace

double distance_to_goal(double start_x, double start_y) {
  const double dx = (kGoalX - start_x) * kMetersPerProviderX;
  const double dy = (kGoalY - start_y) * kMetersPerProviderY;
  return std::hypot(dx, dy);
}

double angle_to_goal(double start_x, double start_y) {
  const double dx = (kGoalX - start_x) * kMetersPerProviderX;
  const double dy = std::abs(kGoalY - start_y) * kMetersPerProviderY;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  return std::atan2(dy, dx);
}

FeatureVector extract_features(double start_x, double start_y, BodyPart body_part) {
  check_frame(start_x, start_y, "shot");
  FeatureVector f;
  f.start_x = start_x;
  f.start_y = start_y;
  f.distance = distance_to_goal(start_x, start_y);
  f.angle = angle_to_goal(start_x, start_y);
  f.bodypart_head = body_part == BodyPart::kHead ? 1.0 : 0.0;
  f.bodypart_other = body_part == BodyPart::kOther ? 1.0 : 0.0;
  return f;
}

FeatureVector extract_features(const ShotRecord& shot) {
  check_frame(shot.start_x, shot.start_y, "shot " + shot.shot_id);
  return extract_features(shot.start_x, shot.start_y, shot.body_part);
}

}  // namespace xgbias::xg
