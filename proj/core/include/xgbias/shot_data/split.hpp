#pragma once

#include <cstdint>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::data {

struct Split {
  ShotDataset train;
  ShotDataset test;
};

// Stratified random split: |test| = round(test_fraction * N) with the goal
// share of the test set matched to the full dataset. A pure function of
// (dataset, test_fraction, seed). Throws DataError when only one class is
// present.
Split stratified_split(const ShotDataset& dataset, double test_fraction, std::uint64_t seed);

}  // namespace xgbias::data
