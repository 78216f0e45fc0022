#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "xgbias/shot_data/types.hpp"
#include "xgbias/xg_core/logistic.hpp"

namespace xgbias::xg {

// Mann-Whitney rank statistic with tied scores sharing their average rank.
// Empty when one class is absent.
std::optional<double> auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

double brier_score(std::span<const double> probabilities, std::span<const std::uint8_t> labels);

struct EvalReport {
  std::optional<double> auroc;  // undefined for a single-class test set
  double brier = 0.0;
  std::size_t n_test = 0;
};

EvalReport evaluate(const XgModel& model, const ShotDataset& test);

}  // namespace xgbias::xg
