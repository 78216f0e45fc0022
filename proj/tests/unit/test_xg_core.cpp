#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "synthetic.hpp"
#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"
#include "xgbias/rng.hpp"
#include "xgbias/xg_core/features.hpp"
#include "xgbias/xg_core/gax.hpp"
#include "xgbias/xg_core/logistic.hpp"
#include "xgbias/xg_core/metrics.hpp"
#include "xgbias/xg_core/model_io.hpp"

namespace xgbias::xg {
namespace {

namespace fs = std::filesystem;
const fs::path kData = XGBIAS_TEST_DATA_DIR;

TrainingData small_fixture() {
  const auto table = csv::Table::from_file(kData / "logit_small.csv");
  TrainingData data;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto f = extract_features(std::stod(table.at(i, "start_x")), std::stod(table.at(i, "start_y")),
                                    parse_body_part(table.at(i, "body_part")));
    data.add(f, table.at(i, "is_goal") == "1");
  }
  return data;
}

TEST(Features, CentralShotDistance) {
  const auto f = extract_features(108.0, 40.0, BodyPart::kFoot);
  EXPECT_NEAR(f.distance, 10.5, 1e-12);
  EXPECT_NEAR(f.angle, 0.0, 1e-12);
  EXPECT_EQ(f.start_x, 108.0);
  EXPECT_EQ(f.bodypart_head, 0.0);
}

TEST(Features, GoalLineAndBodyPartIndicators) {
  EXPECT_NEAR(distance_to_goal(120.0, 30.0), 8.5, 1e-12);
  EXPECT_NEAR(angle_to_goal(120.0, 30.0), std::numbers::pi / 2, 1e-12);
  EXPECT_EQ(angle_to_goal(120.0, 40.0), 0.0);
  EXPECT_NEAR(angle_to_goal(108.0, 50.0), std::atan2(8.5, 10.5), 1e-12);
  EXPECT_EQ(angle_to_goal(108.0, 30.0), angle_to_goal(108.0, 50.0));
  EXPECT_EQ(extract_features(100, 40, BodyPart::kHead).bodypart_head, 1.0);
  EXPECT_EQ(extract_features(100, 40, BodyPart::kOther).bodypart_other, 1.0);
}

TEST(Features, MatchIndependentFixtureValues) {
  const auto table = csv::Table::from_file(kData / "logit_small.csv");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto f = extract_features(std::stod(table.at(i, "start_x")), std::stod(table.at(i, "start_y")),
                                    BodyPart::kFoot);
    ASSERT_NEAR(f.distance, std::stod(table.at(i, "distance")), 1e-10);
    ASSERT_NEAR(f.angle, std::stod(table.at(i, "angle")), 1e-12);
  }
}

TEST(Features, OffPitchIsDataError) {
  EXPECT_THROW(extract_features(120.5, 40, BodyPart::kFoot), DataError);
  EXPECT_THROW(extract_features(100, 80.5, BodyPart::kFoot), DataError);
  EXPECT_THROW(extract_features(std::nan(""), 40, BodyPart::kFoot), DataError);
}

TEST(Logistic, GradientMatchesCentralDifferences) {
  const auto data = small_fixture();
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Params p;
    p[0] = 4.0 * (rng.uniform() - 0.5);
    for (std::size_t j = 1; j < kNumParams; ++j) p[j] = 0.2 * (rng.uniform() - 0.5);
    for (double c : {1.0, 0.1}) {
      const auto g = penalized_gradient(data, p, c);
      for (std::size_t j = 0; j < kNumParams; ++j) {
        const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
        Params up = p, down = p;
        up[j] += h;
        down[j] -= h;
        const double fd = (penalized_loss(data, up, c) - penalized_loss(data, down, c)) / (2 * h);
        ASSERT_LE(std::abs(fd - g[j]), 1e-5 * std::max(1.0, std::abs(g[j])))
            << "trial " << trial << " coordinate " << j;
      }
    }
  }
}

TEST(Logistic, MatchesIndependentSolver) {
  const auto data = small_fixture();
  std::ifstream in(kData / "logit_small_sklearn.json");
  const auto ref = nlohmann::json::parse(in);
  for (const char* c : {"1.0", "0.05"}) {
    TrainOptions o;
    o.penalty_c = std::stod(c);
    const auto m = train_logistic(data, o);
    EXPECT_TRUE(m.meta().converged);
    EXPECT_NEAR(m.intercept(), ref[c]["intercept"].get<double>(), 1e-6) << "C=" << c;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      EXPECT_NEAR(m.weights()[j], ref[c]["weights"][j].get<double>(), 1e-7) << "C=" << c << " w" << j;
    }
  }
}

TEST(Logistic, LossNeverIncreases) {
  const auto data = small_fixture();
  const auto m = train_logistic(data);
  const auto& h = m.meta().loss_history;
  ASSERT_GE(h.size(), 2u);
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1]);
}

TEST(Logistic, WarmStartReachesSameOptimum) {
  const auto data = small_fixture();
  const auto cold = train_logistic(data);
  TrainOptions o;
  o.warm_start = cold.params();
  const auto warm = train_logistic(data, o);
  EXPECT_LE(warm.meta().iterations, 1);
  for (std::size_t j = 0; j < kNumParams; ++j) EXPECT_NEAR(warm.params()[j], cold.params()[j], 1e-9);
}

TEST(Logistic, SingleClassAndBadPenaltyAreRejected) {
  TrainingData data;
  for (int i = 0; i < 10; ++i) data.add(extract_features(100, 40, BodyPart::kFoot), false);
  EXPECT_THROW(train_logistic(data), DataError);
  data.add(extract_features(110, 40, BodyPart::kFoot), true);
  TrainOptions o;
  o.penalty_c = 0.0;
  EXPECT_THROW(train_logistic(data, o), ConfigError);
}

TEST(Logistic, RecoversGeneratingCoefficientsWithinFisherError) {
  const auto truth = reference_model();
  testing::SyntheticSpec spec;
  spec.n = 200000;
  spec.seed = 77;
  const auto ds = testing::synthetic_dataset(truth, spec);
  const auto fit = train_logistic(ds);
  ASSERT_TRUE(fit.meta().converged);

  Eigen::Matrix<double, 7, 7> info = Eigen::Matrix<double, 7, 7>::Zero();
  for (const auto& s : ds.shots) {
    const auto a = extract_features(s).as_array();
    Eigen::Matrix<double, 7, 1> x;
    x(0) = 1.0;
    for (int j = 0; j < 6; ++j) x(j + 1) = a[static_cast<std::size_t>(j)];
    const double p = truth.predict(extract_features(s));
    info += p * (1 - p) * x * x.transpose();
  }
  const Eigen::Matrix<double, 7, 7> cov = info.inverse();
  const auto est = fit.params();
  const auto ref = truth.params();
  for (int j = 0; j < 7; ++j) {
    const double se = std::sqrt(cov(j, j));
    EXPECT_LE(std::abs(est[static_cast<std::size_t>(j)] - ref[static_cast<std::size_t>(j)]), 4.0 * se)
        << "parameter " << j << " se " << se;
  }
}

TEST(Model, ReferenceModelGivesPlausibleCentralXg) {
  const auto m = reference_model();
  const double p = m.predict(extract_features(108, 40, BodyPart::kFoot));
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  EXPECT_LT(m.predict(extract_features(108, 40, BodyPart::kHead)), p);
  EXPECT_GT(p, m.predict(extract_features(90, 40, BodyPart::kFoot)));
  EXPECT_NEAR(sigmoid(m.linear_score(extract_features(108, 40, BodyPart::kFoot))), p, 1e-15);
}

TEST(Model, JsonRoundTripAndValidation) {
  const auto m = train_logistic(small_fixture());
  const auto back = model_from_json(to_json(m));
  EXPECT_EQ(back.params(), m.params());
  EXPECT_EQ(back.meta().n_train, m.meta().n_train);
  auto j = to_json(m);
  EXPECT_EQ(j["feature_names"][2], "distance");
  j["feature_names"][2] = "dist";
  EXPECT_THROW(model_from_json(j), DataError);
  auto path = fs::temp_directory_path() / "xgbias_model_io.json";
  save_model(path, m);
  EXPECT_EQ(load_model(path).params(), m.params());
}

TEST(Metrics, AurocMatchesPairwiseCount) {
  Rng rng(9);
  std::vector<double> s;
  std::vector<std::uint8_t> y;
  for (int i = 0; i < 300; ++i) {
    s.push_back(std::round(rng.uniform() * 20) / 20);  // many ties
    y.push_back(rng.uniform() < 0.3 ? 1 : 0);
  }
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (y[i] == 1 && y[k] == 0) {
        pairs += 1;
        wins += s[i] > s[k] ? 1.0 : s[i] == s[k] ? 0.5 : 0.0;
      }
    }
  }
  EXPECT_NEAR(*auroc(s, y), wins / pairs, 1e-12);
  EXPECT_FALSE(auroc(s, std::vector<std::uint8_t>(s.size(), 0)).has_value());
}

TEST(Metrics, BrierScore) {
  const std::vector<double> p = {0.1, 0.8, 0.5};
  const std::vector<std::uint8_t> y = {0, 1, 1};
  EXPECT_NEAR(brier_score(p, y), (0.01 + 0.04 + 0.25) / 3, 1e-15);
}

TEST(Gax, GoalsMinusCumulativeXg) {
  const std::vector<ScoredShot> shots = {{0.3, true}, {0.2, false}, {0.5, true}};
  EXPECT_NEAR(compute_gax(shots), 1.0, 1e-15);
  EXPECT_EQ(compute_gax(std::span<const ScoredShot>()), 0.0);
}

}  // namespace
}  // namespace xgbias::xg
