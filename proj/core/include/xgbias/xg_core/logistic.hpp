#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xgbias/shot_data/types.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::xg {

// Design rows and 0/1 labels for fitting.
struct TrainingData {
  std::vector<FeatureVector> features;
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  void add(const FeatureVector& f, bool goal) {
    features.push_back(f);
    labels.push_back(goal ? 1 : 0);
  }
  void append(const TrainingData& other);
};

TrainingData make_training_data(const ShotDataset& dataset);

// Parameter vector: intercept first, then one weight per feature.
inline constexpr std::size_t kNumParams = kNumFeatures + 1;
using Params = std::array<double, kNumParams>;

struct TrainOptions {
  double penalty_c = 1.0;  // L2 strength is 1/C; the intercept is not penalized
  double tol = 1e-8;       // gradient max-norm
  int max_iter = 100;
  int max_halvings = 30;
  std::optional<Params> warm_start;  // starting point; zero vector when empty
};

struct TrainingMeta {
  std::size_t n_train = 0;
  bool converged = false;
  int iterations = 0;
  double gradient_max_norm = 0.0;
  std::vector<double> loss_history;  // objective before the first step, then after each step
};

class XgModel {
 public:
  XgModel() = default;
  XgModel(const std::array<double, kNumFeatures>& weights, double intercept,
          double penalty_c = 1.0, TrainingMeta meta = {});

  const std::array<double, kNumFeatures>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  double penalty_c() const { return penalty_c_; }
  const TrainingMeta& meta() const { return meta_; }
  Params params() const;

  double linear_score(const FeatureVector& f) const;

  // sigmoid(intercept + w . f); throws DataError on non-finite features.
  double predict(const FeatureVector& f) const;

 private:
  std::array<double, kNumFeatures> weights_{};
  double intercept_ = 0.0;
  double penalty_c_ = 1.0;
  TrainingMeta meta_;
};

// Table-2 style reference coefficients of a Big-5 2015/16 fit; used as the
// default generator for synthetic experiments that run without event data.
XgModel reference_model();

double sigmoid(double z);

// 0.5 * |w|^2 / C + sum_i logloss(y_i, sigmoid(b + w . x_i)).
double penalized_loss(const TrainingData& data, const Params& params, double penalty_c);

Params penalized_gradient(const TrainingData& data, const Params& params, double penalty_c);

// Damped Newton iterations with a Cholesky solve of the penalized Hessian.
// Throws DataError when only one class is present and NumericalError when
// the Hessian stays singular after ridge boosting. Non-convergence within
// max_iter returns a model with meta().converged == false.
XgModel train_logistic(const TrainingData& data, const TrainOptions& options = {});

inline XgModel train_logistic(const ShotDataset& dataset, const TrainOptions& options = {}) {
  return train_logistic(make_training_data(dataset), options);
}

inline double predict_xg(const XgModel& model, const FeatureVector& f) { return model.predict(f); }

std::vector<double> predict_all(const XgModel& model, const ShotDataset& dataset);

}  // namespace xgbias::xg
