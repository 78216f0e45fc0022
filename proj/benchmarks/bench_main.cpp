#include <benchmark/benchmark.h>

#include <vector>

#include "xgbias/goal_dist/poisson_binomial.hpp"
#include "xgbias/multicalibration/multicalibration.hpp"
#include "xgbias/rng.hpp"
#include "xgbias/shot_sampler/sampler.hpp"
#include "xgbias/xg_core/features.hpp"
#include "xgbias/xg_core/logistic.hpp"

namespace {

using namespace xgbias;

std::vector<ShotRecord> random_shots(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto model = xg::reference_model();
  std::vector<ShotRecord> shots(n);
  for (auto& s : shots) {
    s.start_x = 85.0 + 34.0 * rng.uniform();
    s.start_y = 15.0 + 50.0 * rng.uniform();
    s.body_part = rng.uniform() < 0.2 ? BodyPart::kHead : BodyPart::kFoot;
    s.is_goal = rng.bernoulli(model.predict(xg::extract_features(s)));
  }
  return shots;
}

void BM_PoissonBinomial(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  for (auto& v : p) v = 0.3 * rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(goals::poisson_binomial(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PoissonBinomial)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_TrainLogistic(benchmark::State& state) {
  xg::TrainingData data;
  for (const auto& s : random_shots(static_cast<std::size_t>(state.range(0)), 2)) {
    data.add(xg::extract_features(s), s.is_goal);
  }
  for (auto _ : state) benchmark::DoNotOptimize(xg::train_logistic(data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainLogistic)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_SimulateSeasons(benchmark::State& state) {
  const auto shots = random_shots(40000, 3);
  const auto dist = sampler::build_distribution(shots);
  const auto model = xg::reference_model();
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler::simulate_repetitions(dist, model, 10.0, 100, 2000, 7, threads));
  }
  state.SetItemsProcessed(state.iterations() * 2000 * 100);
}
BENCHMARK(BM_SimulateSeasons)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MulticalibrationFit(benchmark::State& state) {
  const auto shots = random_shots(static_cast<std::size_t>(state.range(0)), 4);
  std::vector<xg::FeatureVector> features;
  std::vector<std::uint8_t> labels;
  std::vector<mcal::SubgroupKey> keys;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    features.push_back(xg::extract_features(shots[i]));
    labels.push_back(shots[i].is_goal ? 1 : 0);
    mcal::SubgroupKey key;
    key.position = static_cast<Position>(i % 3);
    key.volume = static_cast<mcal::VolumeTier>(i / 3 % 3);
    keys.push_back(key);
  }
  mcal::FitOptions options;
  options.tolerance = 0.02;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcal::fit_multicalibration(xg::reference_model(), features, labels, keys,
                                                        mcal::position_volume_groups(),
                                                        mcal::BinSchema(), options));
  }
}
BENCHMARK(BM_MulticalibrationFit)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
