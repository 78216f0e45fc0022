#include "xgbias/xg_core/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "xgbias/error.hpp"

namespace xgbias::xg {

std::optional<double> auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DataError("auroc: score and label counts differ");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

double brier_score(std::span<const double> probabilities, std::span<const std::uint8_t> labels) {
  if (probabilities.size() != labels.size()) throw DataError("brier: size mismatch");
  if (probabilities.empty()) throw DataError("brier: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double d = probabilities[i] - (labels[i] ? 1.0 : 0.0);
    total += d * d;
  }
  return total / static_cast<double>(probabilities.size());
}

EvalReport evaluate(const XgModel& model, const ShotDataset& test) {
  if (test.shots.empty()) throw DataError("evaluate: empty test set");
  const auto preds = predict_all(model, test);
  std::vector<std::uint8_t> labels;
  labels.reserve(test.shots.size());
  for (const auto& s : test.shots) labels.push_back(s.is_goal ? 1 : 0);
  EvalReport report;
  report.n_test = test.shots.size();
  report.auroc = auroc(preds, labels);
  report.brier = brier_score(preds, labels);
  return report;
}

}  // namespace xgbias::xg
