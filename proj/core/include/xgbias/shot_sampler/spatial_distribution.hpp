#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::sampler {

inline constexpr double kCellSizeM = 1.0;
inline constexpr int kGridColumns = 105;  // along the pitch length
inline constexpr int kGridRows = 68;

struct GridCell {
  int ix = 0;
  int iy = 0;
  auto operator<=>(const GridCell&) const = default;
};

// Cell containing a provider-frame location (metric 1 m grid; the far edges
// fold into the last row/column).
GridCell cell_of(double start_x, double start_y);

struct CellStats {
  GridCell cell;
  std::size_t count = 0;
  double probability = 0.0;
  std::array<double, 3> bodypart_mix{};  // indexed by BodyPart: foot, head, other
};

// Empirical distribution of shot origins on a 1 m grid, with the body-part
// mixture of each occupied cell. Immutable once built.
class SpatialShotDistribution {
 public:
  const std::vector<CellStats>& cells() const { return cells_; }
  std::size_t source_n() const { return source_n_; }

  // 0 for cells without shots.
  double probability(GridCell cell) const;
  const CellStats* find(GridCell cell) const;

  // Index of the cell holding cumulative mass u in [0,1).
  std::size_t cell_index_for(double u) const;

 private:
  friend SpatialShotDistribution build_distribution(std::span<const ShotRecord> shots);
  std::vector<CellStats> cells_;       // sorted by (ix, iy)
  std::vector<double> cumulative_;     // running sum of probabilities
  std::size_t source_n_ = 0;
};

// Throws DataError for an empty input or a location outside the frame.
SpatialShotDistribution build_distribution(std::span<const ShotRecord> shots);

}  // namespace xgbias::sampler
