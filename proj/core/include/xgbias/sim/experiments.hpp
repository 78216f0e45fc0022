#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xgbias/shot_data/types.hpp"
#include "xgbias/shot_sampler/sampler.hpp"
#include "xgbias/xg_core/logistic.hpp"

namespace xgbias::sim {

// --- Shot volume vs skill grid --------------------------------------------

struct H1Cell {
  double alpha = 0.0;
  std::size_t n = 0;
  sampler::SimulationSummary summary;
};

struct H1Result {
  std::vector<H1Cell> cells;  // alpha-major, then n, in input order
  std::size_t reps = 0;
  std::uint64_t seed = 0;

  const H1Cell& at(double alpha, std::size_t n) const;
};

// Every (alpha, n) cell reuses the repetition streams stream_seed(seed, r),
// so cells differ only through alpha and n (common random numbers).
H1Result run_h1(const xg::XgModel& model, const sampler::SpatialShotDistribution& dist,
                const std::vector<double>& alphas, const std::vector<std::size_t>& ns,
                std::size_t reps, std::uint64_t seed, unsigned threads = 1);

// --- Player-specific shot locations ----------------------------------------

struct ProfileCell {
  double alpha = 0.0;
  std::size_t n = 0;
  double p_player = 0.0;
  double p_global = 0.0;
  double delta() const { return p_player - p_global; }
};

struct PlayerProfileResult {
  std::map<Id, std::vector<ProfileCell>> players;
  std::vector<std::string> warnings;  // skipped players
};

PlayerProfileResult run_player_profiles(const xg::XgModel& model,
                                        const sampler::SpatialShotDistribution& global,
                                        const std::map<Id, std::vector<ShotRecord>>& player_shots,
                                        const std::vector<double>& alphas,
                                        const std::vector<std::size_t>& ns, std::size_t reps,
                                        std::uint64_t seed, unsigned threads = 1);

// --- Training-set augmentation ---------------------------------------------

struct AugmentationConfig {
  std::vector<double> alphas = {0.0, 10.0, 25.0};
  std::vector<std::size_t> m_values = {0, 1000, 2000, 3000, 4000, 5000};
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  xg::TrainOptions train;
  double max_failure_share = 0.10;
};

struct AugmentationPoint {
  double alpha = 0.0;
  std::size_t m = 0;
  std::size_t runs_ok = 0;
  std::size_t failures = 0;
  double mean_gax = 0.0;
  double sd_gax = 0.0;
  double ci95_low = 0.0;  // mean +- 1.96 sd / sqrt(runs)
  double ci95_high = 0.0;
};

struct AugmentationResult {
  double base_gax = 0.0;  // target GAX under the model trained without additions
  std::vector<AugmentationPoint> curve;  // alpha-major, then m

  const AugmentationPoint& at(double alpha, std::size_t m) const;
};

// For each (alpha, m, run): sample m synthetic shots from `dist`, label them
// Bernoulli(min(1, (1 + alpha/100) * xG_base)), retrain on base + synthetic,
// and score the target's shots. Run r at size m uses stream_seed(seed, m, r)
// for every alpha. Throws NumericalError when more than max_failure_share
// of the runs at any point fail to train.
AugmentationResult run_training_augmentation(const xg::TrainingData& base_train,
                                             const ShotDataset& target_shots,
                                             const sampler::SpatialShotDistribution& dist,
                                             const AugmentationConfig& config);

// --- Skill mixture in the training set -------------------------------------

struct MixtureConfig {
  // Shot counts per skill level; only proportions matter.
  std::vector<std::vector<double>> allocations = {
      {100e3, 800e3, 50e3, 50e3}, {50e3, 750e3, 100e3, 100e3}, {50e3, 650e3, 100e3, 200e3}};
  std::vector<double> alpha_levels = {-5.0, 0.0, 10.0, 20.0};
  std::vector<double> test_alphas = {-5.0, 0.0, 10.0, 20.0};
  std::vector<std::size_t> test_ns = {75, 100, 125};
  std::size_t train_size = 100'000;
  std::size_t reps = 10'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  xg::TrainOptions train;
};

struct MixtureCell {
  double alpha_test = 0.0;
  std::size_t n = 0;
  double mean_gax = 0.0;        // observed GAX under the allocation's model
  double se_gax = 0.0;
  double mean_truth_gax = 0.0;  // GAX against the generating model
  double se_truth_gax = 0.0;
};

struct MixtureAllocationResult {
  std::vector<double> proportions;
  std::vector<std::size_t> counts;  // per level, summing to train_size
  xg::XgModel model;
  std::vector<MixtureCell> cells;   // test alpha-major, then n

  const MixtureCell& at(double alpha, std::size_t n) const;
};

struct MixtureResult {
  std::vector<MixtureAllocationResult> allocations;
};

// Integer shot counts per level from proportions, by largest remainder.
std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t total);

// Builds one training set per allocation from a shared stream of locations
// and label draws (shot i is the same draw in every allocation; only its
// skill level differs), trains a model on each, then scores common test
// seasons with every model. The generating model is the ground truth.
MixtureResult run_skill_mixture(const xg::XgModel& truth,
                                const sampler::SpatialShotDistribution& dist,
                                const MixtureConfig& config);

}  // namespace xgbias::sim
