#include "xgbias/shot_sampler/spatial_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "xgbias/error.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::sampler {

GridCell cell_of(double start_x, double start_y) {
  const double xm = start_x * xg::kMetersPerProviderX;
  const double ym = start_y * xg::kMetersPerProviderY;
  const int ix = std::clamp(static_cast<int>(std::floor(xm / kCellSizeM)), 0, kGridColumns - 1);
  const int iy = std::clamp(static_cast<int>(std::floor(ym / kCellSizeM)), 0, kGridRows - 1);
  return {ix, iy};
}

const CellStats* SpatialShotDistribution::find(GridCell cell) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), cell,
                             [](const CellStats& c, GridCell key) { return c.cell < key; });
  return (it != cells_.end() && it->cell == cell) ? &*it : nullptr;
}

double SpatialShotDistribution::probability(GridCell cell) const {
  const auto* c = find(cell);
  return c ? c->probability : 0.0;
}

std::size_t SpatialShotDistribution::cell_index_for(double u) const {
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cells_.size() - 1);
}

SpatialShotDistribution build_distribution(std::span<const ShotRecord> shots) {
  if (shots.empty()) throw DataError("build_distribution: no shots");
  std::map<GridCell, std::array<std::size_t, 3>> counts;
  for (const auto& s : shots) {
    validate(s);
    counts[cell_of(s.start_x, s.start_y)][static_cast<std::size_t>(s.body_part)] += 1;
  }
  SpatialShotDistribution dist;
  dist.source_n_ = shots.size();
  const auto n = static_cast<double>(shots.size());
  double running = 0.0;
  for (const auto& [cell, parts] : counts) {
    CellStats stats;
    stats.cell = cell;
    stats.count = parts[0] + parts[1] + parts[2];
    stats.probability = static_cast<double>(stats.count) / n;
    for (std::size_t b = 0; b < 3; ++b) {
      stats.bodypart_mix[b] = static_cast<double>(parts[b]) / static_cast<double>(stats.count);
    }
    running += stats.probability;
    dist.cells_.push_back(stats);
    dist.cumulative_.push_back(running);
  }
  return dist;
}

}  // namespace xgbias::sampler
