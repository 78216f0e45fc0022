#include "xgbias/sim/experiments.hpp"

#include <cmath>
#include <numeric>

#include "xgbias/error.hpp"
#include "xgbias/parallel.hpp"
#include "xgbias/rng.hpp"

namespace xgbias::sim {
namespace {

// Stream tags keep the experiments' random streams apart.
constexpr std::uint64_t kAugmentTag = 0xA06;
constexpr std::uint64_t kMixtureTrainTag = 0x7A1;
constexpr std::uint64_t kMixtureTestTag = 0x7E5;
constexpr std::size_t kTrainBlock = 4096;

struct MeanSe {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
  }
  out.se = out.sd / std::sqrt(n);
  return out;
}

void require_grid(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

const H1Cell& H1Result::at(double alpha, std::size_t n) const {
  for (const auto& c : cells) {
    if (c.alpha == alpha && c.n == n) return c;
  }
  throw ConfigError("no H1 cell for alpha " + std::to_string(alpha) + ", n " + std::to_string(n));
}

H1Result run_h1(const xg::XgModel& model, const sampler::SpatialShotDistribution& dist,
                const std::vector<double>& alphas, const std::vector<std::size_t>& ns,
                std::size_t reps, std::uint64_t seed, unsigned threads) {
  require_grid(!alphas.empty() && !ns.empty(), "H1 grid needs at least one alpha and one n");
  H1Result result;
  result.reps = reps;
  result.seed = seed;
  for (double alpha : alphas) {
    for (std::size_t n : ns) {
      result.cells.push_back(
          {alpha, n, sampler::simulate_repetitions(dist, model, alpha, n, reps, seed, threads)});
    }
  }
  return result;
}

PlayerProfileResult run_player_profiles(const xg::XgModel& model,
                                        const sampler::SpatialShotDistribution& global,
                                        const std::map<Id, std::vector<ShotRecord>>& player_shots,
                                        const std::vector<double>& alphas,
                                        const std::vector<std::size_t>& ns, std::size_t reps,
                                        std::uint64_t seed, unsigned threads) {
  require_grid(!alphas.empty() && !ns.empty(), "profile grid needs at least one alpha and one n");
  PlayerProfileResult result;
  std::vector<double> p_global;
  for (double alpha : alphas) {
    for (std::size_t n : ns) {
      p_global.push_back(
          sampler::simulate_repetitions(global, model, alpha, n, reps, seed, threads).p_overperform);
    }
  }
  for (const auto& [player, shots] : player_shots) {
    if (shots.empty()) {
      result.warnings.push_back("player " + std::to_string(player) + " has no shots; skipped");
      continue;
    }
    const auto dist = sampler::build_distribution(shots);
    auto& cells = result.players[player];
    std::size_t k = 0;
    for (double alpha : alphas) {
      for (std::size_t n : ns) {
        const double p =
            sampler::simulate_repetitions(dist, model, alpha, n, reps, seed, threads).p_overperform;
        cells.push_back({alpha, n, p, p_global[k++]});
      }
    }
  }
  return result;
}

const AugmentationPoint& AugmentationResult::at(double alpha, std::size_t m) const {
  for (const auto& p : curve) {
    if (p.alpha == alpha && p.m == m) return p;
  }
  throw ConfigError("no augmentation point for alpha " + std::to_string(alpha) + ", m " +
                    std::to_string(m));
}

AugmentationResult run_training_augmentation(const xg::TrainingData& base_train,
                                             const ShotDataset& target_shots,
                                             const sampler::SpatialShotDistribution& dist,
                                             const AugmentationConfig& config) {
  require_grid(!config.alphas.empty() && !config.m_values.empty() && config.runs > 0,
               "augmentation needs alphas, m values and at least one run");
  if (target_shots.shots.empty()) throw DataError("augmentation: target player has no shots");
  for (double a : config.alphas) sampler::scale_xg(0.0, a);

  const xg::XgModel base = xg::train_logistic(base_train, config.train);
  std::vector<xg::FeatureVector> eval;
  double goals = 0.0;
  for (const auto& s : target_shots.shots) {
    eval.push_back(xg::extract_features(s));
    goals += s.is_goal ? 1.0 : 0.0;
  }
  auto target_gax = [&](const xg::XgModel& model) {
    double xg_sum = 0.0;
    for (const auto& f : eval) xg_sum += model.predict(f);
    return goals - xg_sum;
  };

  AugmentationResult result;
  result.base_gax = target_gax(base);

  xg::TrainOptions train = config.train;
  train.warm_start = base.params();
  const sampler::ShotSampler sampler(dist, base);
  const std::size_t n_alpha = config.alphas.size();
  const std::size_t n_m = config.m_values.size();
  const std::size_t runs = config.runs;
  // gax[(a * n_m + mi) * runs + r]; NaN marks a failed run.
  std::vector<double> gax(n_alpha * n_m * runs, std::nan(""));

  parallel_for(n_m * runs, config.threads, [&](std::size_t task) {
    const std::size_t mi = task / runs;
    const std::size_t r = task % runs;
    const std::size_t m = config.m_values[mi];
    for (std::size_t a = 0; a < n_alpha; ++a) {
      double& slot = gax[(a * n_m + mi) * runs + r];
      if (m == 0) {
        slot = result.base_gax;
        continue;
      }
      Rng rng(stream_seed(config.seed, kAugmentTag, m, r));
      xg::TrainingData data = base_train;
      data.features.reserve(base_train.size() + m);
      data.labels.reserve(base_train.size() + m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto shot = sampler.draw(rng, config.alphas[a]);
        data.add(shot.features, shot.outcome);
      }
      try {
        const auto model = xg::train_logistic(data, train);
        if (model.meta().converged) slot = target_gax(model);
      } catch (const Error&) {
        // counted as a failed run below
      }
    }
  });

  for (std::size_t a = 0; a < n_alpha; ++a) {
    for (std::size_t mi = 0; mi < n_m; ++mi) {
      AugmentationPoint point;
      point.alpha = config.alphas[a];
      point.m = config.m_values[mi];
      std::vector<double> ok;
      for (std::size_t r = 0; r < runs; ++r) {
        const double v = gax[(a * n_m + mi) * runs + r];
        if (std::isnan(v)) ++point.failures;
        else ok.push_back(v);
      }
      if (static_cast<double>(point.failures) > config.max_failure_share * static_cast<double>(runs)) {
        throw NumericalError("augmentation: " + std::to_string(point.failures) + " of " +
                             std::to_string(runs) + " retrainings failed at alpha " +
                             std::to_string(point.alpha) + ", m " + std::to_string(point.m));
      }
      const auto stats = mean_se(ok);
      point.runs_ok = ok.size();
      point.mean_gax = stats.mean;
      point.sd_gax = stats.sd;
      point.ci95_low = stats.mean - 1.96 * stats.se;
      point.ci95_high = stats.mean + 1.96 * stats.se;
      result.curve.push_back(point);
    }
  }
  return result;
}

std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0.0)) throw ConfigError("allocation weights must be positive");
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("allocation weights must be non-negative");
  }
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / sum * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

const MixtureCell& MixtureAllocationResult::at(double alpha, std::size_t n) const {
  for (const auto& c : cells) {
    if (c.alpha_test == alpha && c.n == n) return c;
  }
  throw ConfigError("no mixture cell for alpha " + std::to_string(alpha) + ", n " + std::to_string(n));
}

MixtureResult run_skill_mixture(const xg::XgModel& truth,
                                const sampler::SpatialShotDistribution& dist,
                                const MixtureConfig& config) {
  require_grid(!config.allocations.empty() && !config.test_alphas.empty() &&
                   !config.test_ns.empty() && config.reps > 0 && config.train_size > 0,
               "mixture needs allocations, test grid, reps and a training size");
  for (const auto& alloc : config.allocations) {
    if (alloc.size() != config.alpha_levels.size()) {
      throw ConfigError("allocation has " + std::to_string(alloc.size()) + " entries for " +
                        std::to_string(config.alpha_levels.size()) + " skill levels");
    }
  }
  for (double a : config.alpha_levels) sampler::scale_xg(0.0, a);
  for (double a : config.test_alphas) sampler::scale_xg(0.0, a);

  const sampler::ShotSampler sampler(dist, truth);
  MixtureResult result;
  const std::size_t n_blocks = (config.train_size + kTrainBlock - 1) / kTrainBlock;
  for (const auto& alloc : config.allocations) {
    MixtureAllocationResult out;
    const double sum = std::accumulate(alloc.begin(), alloc.end(), 0.0);
    for (double w : alloc) out.proportions.push_back(w / sum);
    out.counts = allocate_counts(alloc, config.train_size);
    // Skill level of shot i: levels are laid out contiguously in level order.
    std::vector<std::size_t> level_end(out.counts.size());
    std::partial_sum(out.counts.begin(), out.counts.end(), level_end.begin());

    xg::TrainingData data;
    data.features.resize(config.train_size);
    data.labels.resize(config.train_size);
    parallel_for(n_blocks, config.threads, [&](std::size_t b) {
      Rng rng(stream_seed(config.seed, kMixtureTrainTag, b));
      std::size_t level = 0;
      const std::size_t end = std::min(config.train_size, (b + 1) * kTrainBlock);
      for (std::size_t i = b * kTrainBlock; i < end; ++i) {
        while (i >= level_end[level]) ++level;
        const auto shot = sampler.draw(rng, config.alpha_levels[level]);
        data.features[i] = shot.features;
        data.labels[i] = shot.outcome ? 1 : 0;
      }
    });
    xg::TrainOptions train = config.train;
    if (!train.warm_start) train.warm_start = truth.params();
    out.model = xg::train_logistic(data, train);
    result.allocations.push_back(std::move(out));
  }

  const std::size_t n_alloc = result.allocations.size();
  const std::size_t n_alpha = config.test_alphas.size();
  const std::size_t n_ns = config.test_ns.size();
  // Per rep: for each (alpha, n): truth GAX followed by one GAX per allocation.
  const std::size_t stride = n_alpha * n_ns * (n_alloc + 1);
  std::vector<double> draws(config.reps * stride);
  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    double* row = draws.data() + r * stride;
    for (std::size_t a = 0; a < n_alpha; ++a) {
      for (std::size_t k = 0; k < n_ns; ++k) {
        Rng rng(stream_seed(config.seed, kMixtureTestTag, config.test_ns[k], r));
        double goals = 0.0, truth_xg = 0.0;
        std::vector<double> model_xg(n_alloc, 0.0);
        for (std::size_t i = 0; i < config.test_ns[k]; ++i) {
          const auto shot = sampler.draw(rng, config.test_alphas[a]);
          goals += shot.outcome ? 1.0 : 0.0;
          truth_xg += shot.xg_raw;
          for (std::size_t m = 0; m < n_alloc; ++m) {
            model_xg[m] += result.allocations[m].model.predict(shot.features);
          }
        }
        double* cell = row + (a * n_ns + k) * (n_alloc + 1);
        cell[0] = goals - truth_xg;
        for (std::size_t m = 0; m < n_alloc; ++m) cell[m + 1] = goals - model_xg[m];
      }
    }
  });

  for (std::size_t m = 0; m < n_alloc; ++m) {
    for (std::size_t a = 0; a < n_alpha; ++a) {
      for (std::size_t k = 0; k < n_ns; ++k) {
        std::vector<double> observed, truth_gax;
        observed.reserve(config.reps);
        truth_gax.reserve(config.reps);
        for (std::size_t r = 0; r < config.reps; ++r) {
          const double* cell = draws.data() + r * stride + (a * n_ns + k) * (n_alloc + 1);
          truth_gax.push_back(cell[0]);
          observed.push_back(cell[m + 1]);
        }
        const auto o = mean_se(observed);
        const auto t = mean_se(truth_gax);
        result.allocations[m].cells.push_back(
            {config.test_alphas[a], config.test_ns[k], o.mean, o.se, t.mean, t.se});
      }
    }
  }
  return result;
}

}  // namespace xgbias::sim
