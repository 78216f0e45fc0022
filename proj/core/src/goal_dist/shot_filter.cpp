#include "xgbias/goal_dist/shot_filter.hpp"

#include <charconv>

#include "xgbias/error.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::goals {
namespace {

double to_unit(double meters, LengthUnit unit) {
  return unit == LengthUnit::kYards ? meters / xg::kMetersPerYard : meters;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    out.push_back(text.substr(start, end == std::string_view::npos ? text.size() - start : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("filter: bad number '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return v;
}

}  // namespace

DistanceBand::DistanceBand(double lo_, double hi_, LengthUnit unit_) : lo(lo_), hi(hi_), unit(unit_) {
  if (!(lo < hi)) throw ConfigError("distance band needs lo < hi");
}

bool DistanceBand::contains_meters(double distance_m) const {
  const double d = to_unit(distance_m, unit);
  return d >= lo && d < hi;
}

ShotFilter parse_filter(std::string_view spec) {
  ShotFilter filter;
  if (spec.empty()) return filter;
  for (auto item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("filter: expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "deflected") {
      if (value == "exclude") filter.exclude_deflected = true;
      else if (value == "include") filter.exclude_deflected = false;
      else throw ConfigError("filter: deflected must be exclude or include");
    } else if (key == "band") {
      LengthUnit unit;
      std::string_view range;
      if (value.ends_with("yd")) {
        unit = LengthUnit::kYards;
        range = value.substr(0, value.size() - 2);
      } else if (value.ends_with("m")) {
        unit = LengthUnit::kMeters;
        range = value.substr(0, value.size() - 1);
      } else {
        throw ConfigError("filter: band needs a unit suffix (m or yd)");
      }
      const auto dash = range.find('-');
      if (dash == std::string_view::npos) throw ConfigError("filter: band must be lo-hi");
      filter.distance_band.emplace(parse_double(range.substr(0, dash), item),
                                   parse_double(range.substr(dash + 1), item), unit);
    } else if (key == "body") {
      for (auto part : split(value, '|')) {
        try {
          filter.body_parts.insert(parse_body_part(part));
        } catch (const DataError&) {
          throw ConfigError("filter: unknown body part '" + std::string(part) + "'");
        }
      }
    } else {
      throw ConfigError("filter: unknown key '" + std::string(key) + "'");
    }
  }
  return filter;
}

bool keeps(const ShotFilter& filter, const ShotRecord& shot) {
  if (filter.exclude_deflected && shot.is_deflected) return false;
  if (!filter.body_parts.empty() && !filter.body_parts.contains(shot.body_part)) return false;
  if (filter.distance_band &&
      !filter.distance_band->contains_meters(xg::distance_to_goal(shot.start_x, shot.start_y))) {
    return false;
  }
  if (filter.custom && !filter.custom(shot)) return false;
  return true;
}

FilterResult filter_shots(const std::vector<ScoredRecord>& shots, const ShotFilter& filter) {
  FilterResult result;
  auto& r = result.report;
  for (const auto& s : shots) {
    if (filter.exclude_deflected && s.shot.is_deflected) {
      ++r.removed_deflected;
    } else if (!filter.body_parts.empty() && !filter.body_parts.contains(s.shot.body_part)) {
      ++r.removed_body_part;
    } else if (filter.distance_band &&
               !filter.distance_band->contains_meters(
                   xg::distance_to_goal(s.shot.start_x, s.shot.start_y))) {
      ++r.removed_distance;
    } else if (filter.custom && !filter.custom(s.shot)) {
      ++r.removed_custom;
    } else {
      result.shots.push_back(s);
    }
  }
  r.kept = result.shots.size();
  return result;
}

}  // namespace xgbias::goals
