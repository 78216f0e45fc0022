#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::goals {

enum class LengthUnit { kMeters, kYards };

// Half-open distance band [lo, hi) expressed in `unit`.
struct DistanceBand {
  double lo = 0.0;
  double hi = 0.0;
  LengthUnit unit = LengthUnit::kMeters;

  // Throws ConfigError unless lo < hi.
  DistanceBand(double lo, double hi, LengthUnit unit);
  bool contains_meters(double distance_m) const;
};

struct ShotFilter {
  bool exclude_deflected = false;
  std::set<BodyPart> body_parts;  // empty keeps every body part
  std::optional<DistanceBand> distance_band;
  std::function<bool(const ShotRecord&)> custom;  // optional extra predicate
  std::string custom_descriptor;

  bool empty() const {
    return !exclude_deflected && body_parts.empty() && !distance_band && !custom;
  }
};

// Parses "deflected=exclude,band=25-35yd,body=foot|head". Band units: m, yd.
ShotFilter parse_filter(std::string_view spec);

struct ScoredRecord {
  ShotRecord shot;
  double xg = 0.0;
};

struct FilterReport {
  std::size_t kept = 0;
  std::size_t removed_deflected = 0;
  std::size_t removed_body_part = 0;
  std::size_t removed_distance = 0;
  std::size_t removed_custom = 0;
};

struct FilterResult {
  std::vector<ScoredRecord> shots;
  FilterReport report;  // each removed shot is charged to the first criterion it fails
};

bool keeps(const ShotFilter& filter, const ShotRecord& shot);

FilterResult filter_shots(const std::vector<ScoredRecord>& shots, const ShotFilter& filter);

}  // namespace xgbias::goals
