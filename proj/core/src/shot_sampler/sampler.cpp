#include "xgbias/shot_sampler/sampler.hpp"

#include <cmath>
#include <string>

#include "xgbias/error.hpp"
#include "xgbias/parallel.hpp"

namespace xgbias::sampler {

double scale_xg(double xg, double alpha) {
  if (alpha < -100.0) {
    throw ConfigError("alpha " + std::to_string(alpha) + " gives a negative scoring probability");
  }
  return std::min(1.0, (1.0 + alpha / 100.0) * xg);
}

SyntheticShot ShotSampler::draw(Rng& rng, double alpha) const {
  const double u_cell = rng.uniform();
  const double u_x = rng.uniform();
  const double u_y = rng.uniform();
  const double u_body = rng.uniform();
  const double u_goal = rng.uniform();

  const auto& cell = dist_->cells()[dist_->cell_index_for(u_cell)];
  SyntheticShot shot;
  const double xm = (cell.cell.ix + u_x) * kCellSizeM;
  const double ym = (cell.cell.iy + u_y) * kCellSizeM;
  shot.start_x = std::min(kProviderLength, xm / xg::kMetersPerProviderX);
  shot.start_y = std::min(kProviderWidth, ym / xg::kMetersPerProviderY);

  const auto& mix = cell.bodypart_mix;
  shot.body_part = u_body < mix[0]            ? BodyPart::kFoot
                   : u_body < mix[0] + mix[1] ? BodyPart::kHead
                   : mix[2] > 0.0             ? BodyPart::kOther
                   : mix[1] > 0.0             ? BodyPart::kHead
                                              : BodyPart::kFoot;

  shot.features = xg::extract_features(shot.start_x, shot.start_y, shot.body_part);
  shot.xg_raw = model_->predict(shot.features);
  const double scaled = (1.0 + alpha / 100.0) * shot.xg_raw;
  shot.clamped = scaled > 1.0;
  shot.xg_scaled = scale_xg(shot.xg_raw, alpha);
  shot.outcome = u_goal < shot.xg_scaled;
  return shot;
}

SampleBatch sample_shots(const SpatialShotDistribution& dist, const xg::XgModel& model,
                         std::size_t n, double alpha, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample_shots: n must be at least 1");
  scale_xg(0.0, alpha);
  ShotSampler sampler(dist, model);
  Rng rng(seed);
  SampleBatch batch;
  batch.shots.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.shots.push_back(sampler.draw(rng, alpha));
    batch.clamp_events += batch.shots.back().clamped ? 1 : 0;
  }
  return batch;
}

SeasonDraw simulate_season(const ShotSampler& sampler, Rng& rng, std::size_t n, double alpha) {
  SeasonDraw season;
  for (std::size_t i = 0; i < n; ++i) {
    const auto shot = sampler.draw(rng, alpha);
    season.goals += shot.outcome ? 1.0 : 0.0;
    season.xg_raw += shot.xg_raw;
    season.clamp_events += shot.clamped ? 1 : 0;
  }
  return season;
}

SimulationSummary simulate_repetitions(const SpatialShotDistribution& dist,
                                       const xg::XgModel& model, double alpha, std::size_t n,
                                       std::size_t reps, std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw ConfigError("reps must be at least 1");
  if (n == 0) throw ConfigError("shot count must be at least 1");
  scale_xg(0.0, alpha);
  const ShotSampler sampler(dist, model);
  std::vector<SeasonDraw> seasons(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng(stream_seed(seed, r));
    seasons[r] = simulate_season(sampler, rng, n, alpha);
  });

  SimulationSummary out;
  out.reps = reps;
  double sum = 0.0;
  std::size_t exceed = 0;
  for (const auto& s : seasons) {
    sum += s.gax();
    exceed += s.goals > s.xg_raw ? 1 : 0;
    out.clamp_events += s.clamp_events;
  }
  const double r = static_cast<double>(reps);
  out.mean_gax = sum / r;
  double ss = 0.0;
  for (const auto& s : seasons) ss += (s.gax() - out.mean_gax) * (s.gax() - out.mean_gax);
  out.std_gax = reps > 1 ? std::sqrt(ss / (r - 1.0)) : 0.0;
  out.p_overperform = static_cast<double>(exceed) / r;
  out.se = std::sqrt(out.p_overperform * (1.0 - out.p_overperform) / r);
  return out;
}

double consistency_probability(double p, int k, int m) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("season probability must lie in [0,1]");
  if (m < 0 || k < 0 || k > m) throw ConfigError("need 0 <= k <= m");
  double tail = 0.0;
  double choose = 1.0;  // C(m, j), built incrementally
  for (int j = 0; j <= m; ++j) {
    if (j > 0) choose = choose * (m - j + 1) / j;
    if (j >= k) tail += choose * std::pow(p, j) * std::pow(1.0 - p, m - j);
  }
  return std::min(1.0, tail);
}

}  // namespace xgbias::sampler
