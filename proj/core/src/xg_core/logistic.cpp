#include "xgbias/xg_core/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "xgbias/error.hpp"

namespace xgbias::xg {
namespace {

using Vec = Eigen::Matrix<double, kNumParams, 1>;
using Mat = Eigen::Matrix<double, kNumParams, kNumParams>;

Vec design_row(const FeatureVector& f) {
  Vec x;
  x(0) = 1.0;
  const auto a = f.as_array();
  for (std::size_t j = 0; j < kNumFeatures; ++j) x(static_cast<Eigen::Index>(j + 1)) = a[j];
  return x;
}

Vec to_vec(const Params& p) { return Eigen::Map<const Vec>(p.data()); }

Params to_params(const Vec& v) {
  Params p;
  Eigen::Map<Vec>(p.data()) = v;
  return p;
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double loss_at(const TrainingData& data, const Vec& theta, double c) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = theta.dot(design_row(data.features[i]));
    total += softplus(z) - (data.labels[i] ? z : 0.0);
  }
  return total + 0.5 * theta.tail<kNumFeatures>().squaredNorm() / c;
}

void gradient_hessian(const TrainingData& data, const Vec& theta, double c, Vec& grad, Mat& hess) {
  grad.setZero();
  hess.setZero();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec x = design_row(data.features[i]);
    const double p = sigmoid(theta.dot(x));
    grad += (p - data.labels[i]) * x;
    hess.selfadjointView<Eigen::Lower>().rankUpdate(x, p * (1.0 - p));
  }
  hess = hess.selfadjointView<Eigen::Lower>();
  for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(kNumParams); ++j) {
    grad(j) += theta(j) / c;
    hess(j, j) += 1.0 / c;
  }
}

void check_labels(const TrainingData& data) {
  if (data.features.size() != data.labels.size()) {
    throw DataError("training data: feature and label counts differ");
  }
  std::size_t goals = 0;
  for (auto y : data.labels) goals += y ? 1 : 0;
  if (goals == 0 || goals == data.size()) {
    throw DataError("training data must contain both goals and misses");
  }
  for (const auto& f : data.features) {
    for (double v : f.as_array()) {
      if (!std::isfinite(v)) throw DataError("training data contains a non-finite feature");
    }
  }
}

}  // namespace

void TrainingData::append(const TrainingData& other) {
  features.insert(features.end(), other.features.begin(), other.features.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

TrainingData make_training_data(const ShotDataset& dataset) {
  TrainingData data;
  data.features.reserve(dataset.shots.size());
  data.labels.reserve(dataset.shots.size());
  for (const auto& s : dataset.shots) data.add(extract_features(s), s.is_goal);
  return data;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

XgModel::XgModel(const std::array<double, kNumFeatures>& weights, double intercept,
                 double penalty_c, TrainingMeta meta)
    : weights_(weights), intercept_(intercept), penalty_c_(penalty_c), meta_(std::move(meta)) {}

Params XgModel::params() const {
  Params p;
  p[0] = intercept_;
  std::copy(weights_.begin(), weights_.end(), p.begin() + 1);
  return p;
}

double XgModel::linear_score(const FeatureVector& f) const {
  const auto a = f.as_array();
  double z = intercept_;
  for (std::size_t j = 0; j < kNumFeatures; ++j) z += weights_[j] * a[j];
  return z;
}

double XgModel::predict(const FeatureVector& f) const {
  for (double v : f.as_array()) {
    if (!std::isfinite(v)) throw DataError("predict: non-finite feature value");
  }
  return sigmoid(linear_score(f));
}

XgModel reference_model() {
  return XgModel({-0.12903395599643944, 0.0007081390917350903, -0.31351026346703825,
                  0.09095528657471205, -1.2946488935455573, -0.19292432746094432},
                 14.301040398979099);
}

double penalized_loss(const TrainingData& data, const Params& params, double penalty_c) {
  return loss_at(data, to_vec(params), penalty_c);
}

Params penalized_gradient(const TrainingData& data, const Params& params, double penalty_c) {
  Vec grad;
  Mat hess;
  gradient_hessian(data, to_vec(params), penalty_c, grad, hess);
  return to_params(grad);
}

XgModel train_logistic(const TrainingData& data, const TrainOptions& options) {
  check_labels(data);
  if (!(options.penalty_c > 0.0)) throw ConfigError("penalty C must be positive");

  const double c = options.penalty_c;
  Vec theta = options.warm_start ? to_vec(*options.warm_start) : Vec::Zero();
  TrainingMeta meta;
  meta.n_train = data.size();
  double loss = loss_at(data, theta, c);
  meta.loss_history.push_back(loss);

  Vec grad;
  Mat hess;
  for (int iter = 0;; ++iter) {
    gradient_hessian(data, theta, c, grad, hess);
    meta.gradient_max_norm = grad.cwiseAbs().maxCoeff();
    meta.iterations = iter;
    if (meta.gradient_max_norm <= options.tol) {
      meta.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    Eigen::LLT<Mat> llt(hess);
    double ridge = 1e-10 * hess.trace() / static_cast<double>(kNumParams);
    for (int boost = 0; llt.info() != Eigen::Success; ++boost) {
      if (boost == 8) throw NumericalError("Newton step: Hessian is singular after ridge boosting");
      llt.compute(hess + ridge * Mat::Identity());
      ridge *= 100.0;
    }
    const Vec step = llt.solve(grad);
    const double decrement = grad.dot(step);  // Newton decrement squared
    if (0.5 * decrement <= 1e-12 * std::max(1.0, std::abs(loss))) {
      meta.converged = true;
      break;
    }

    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      const Vec candidate = theta - scale * step;
      const double candidate_loss = loss_at(data, candidate, c);
      if (candidate_loss <= loss) {
        theta = candidate;
        loss = candidate_loss;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No representable decrease left: the objective is at its floating-point
      // floor. Accept as converged when the Newton decrement is negligible.
      meta.converged = 0.5 * decrement <= 1e-12 * std::max(1.0, std::abs(loss));
      break;
    }
    meta.loss_history.push_back(loss);
  }

  std::array<double, kNumFeatures> w;
  for (std::size_t j = 0; j < kNumFeatures; ++j) w[j] = theta(static_cast<Eigen::Index>(j + 1));
  return XgModel(w, theta(0), c, std::move(meta));
}

std::vector<double> predict_all(const XgModel& model, const ShotDataset& dataset) {
  std::vector<double> out;
  out.reserve(dataset.shots.size());
  for (const auto& s : dataset.shots) out.push_back(model.predict(extract_features(s)));
  return out;
}

}  // namespace xgbias::xg
