#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xgbias/rng.hpp"
#include "xgbias/shot_sampler/spatial_distribution.hpp"
#include "xgbias/xg_core/logistic.hpp"

namespace xgbias::sampler {

// Probability of a finisher `alpha` percent better than the reference:
// min(1, (1 + alpha/100) * xg). Throws ConfigError for alpha < -100.
double scale_xg(double xg, double alpha);

struct SyntheticShot {
  double start_x = 0.0;  // provider units
  double start_y = 0.0;
  BodyPart body_part = BodyPart::kFoot;
  xg::FeatureVector features;
  double xg_raw = 0.0;
  double xg_scaled = 0.0;
  bool outcome = false;
  bool clamped = false;  // scaled probability hit 1
};

// Draws synthetic shots from a spatial distribution, scores them with the
// reference model and samples skill-scaled outcomes. Each shot consumes a
// fixed number of draws in a fixed order, so two samplers fed the same Rng
// state produce the same locations whatever their alpha.
class ShotSampler {
 public:
  ShotSampler(const SpatialShotDistribution& dist, const xg::XgModel& model)
      : dist_(&dist), model_(&model) {}

  SyntheticShot draw(Rng& rng, double alpha) const;

  const SpatialShotDistribution& distribution() const { return *dist_; }
  const xg::XgModel& model() const { return *model_; }

 private:
  const SpatialShotDistribution* dist_;
  const xg::XgModel* model_;
};

struct SampleBatch {
  std::vector<SyntheticShot> shots;
  std::size_t clamp_events = 0;
};

// n shots from one seeded stream.
SampleBatch sample_shots(const SpatialShotDistribution& dist, const xg::XgModel& model,
                         std::size_t n, double alpha, std::uint64_t seed);

// One season: GAX = sum(outcome) - sum(xg_raw) over n shots.
struct SeasonDraw {
  double goals = 0.0;
  double xg_raw = 0.0;
  std::size_t clamp_events = 0;
  double gax() const { return goals - xg_raw; }
};

SeasonDraw simulate_season(const ShotSampler& sampler, Rng& rng, std::size_t n, double alpha);

struct SimulationSummary {
  std::size_t reps = 0;
  double mean_gax = 0.0;
  double std_gax = 0.0;        // sample standard deviation over repetitions
  double p_overperform = 0.0;  // fraction with goals strictly above cumulative raw xG
  double se = 0.0;             // binomial standard error of p_overperform
  std::size_t clamp_events = 0;
};

// Repetition r uses the stream stream_seed(seed, r); results do not depend on
// `threads`.
SimulationSummary simulate_repetitions(const SpatialShotDistribution& dist,
                                       const xg::XgModel& model, double alpha, std::size_t n,
                                       std::size_t reps, std::uint64_t seed, unsigned threads = 1);

inline SimulationSummary overperformance_probability(const SpatialShotDistribution& dist,
                                                     const xg::XgModel& model, double alpha,
                                                     std::size_t n, std::size_t reps,
                                                     std::uint64_t seed, unsigned threads = 1) {
  return simulate_repetitions(dist, model, alpha, n, reps, seed, threads);
}

// P(X >= k) for X ~ Binomial(m, p_season), summed exactly over the tail.
double consistency_probability(double p_season, int k, int m);

}  // namespace xgbias::sampler
