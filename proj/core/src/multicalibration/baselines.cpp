#include "xgbias/multicalibration/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "xgbias/error.hpp"

namespace xgbias::mcal {
namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

OverperformanceSummary summarize(const std::vector<std::pair<double, double>>& goals_xg) {
  OverperformanceSummary s;
  double total = 0.0;
  for (const auto& [g, x] : goals_xg) {
    if (g > x && x > 0.0) {
      ++s.exceeders;
      total += 100.0 * (g - x) / x;
    }
  }
  if (s.exceeders) s.mean_overperformance = total / static_cast<double>(s.exceeders);
  return s;
}

}  // namespace

SubgroupKey representative_key(const GroupPattern& pattern) {
  SubgroupKey key;
  if (pattern.volume) key.volume = *pattern.volume;
  if (pattern.position) key.position = *pattern.position;
  if (pattern.team) key.team = *pattern.team;
  return key;
}

std::vector<double> group_weights(const MultiCalibratedModel& model, const ShotDataset& dataset,
                                  std::span<const SubgroupKey> keys, WeightBasis basis) {
  if (keys.size() != dataset.shots.size()) throw DataError("group weights: one key per shot required");
  std::vector<double> counts(model.groups().size(), 0.0);
  std::set<Id> seen;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto g = model.group_of(keys[i]);
    if (!g) continue;
    if (basis == WeightBasis::kPlayers) {
      const Id pid = dataset.shots[i].player_id;
      if (pid == kUnknownId || !seen.insert(pid).second) continue;
    }
    counts[*g] += 1.0;
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total == 0.0) throw DataError("group weights: no shots fall in a fitted group");
  for (auto& c : counts) c /= total;
  return counts;
}

double weighted_average_player(const MultiCalibratedModel& model,
                               std::span<const xg::FeatureVector> shots,
                               std::span<const double> weights) {
  if (weights.size() != model.groups().size()) {
    throw ConfigError("weights must align with the fitted groups");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("group weights must sum to 1");
  double total = 0.0;
  for (const auto& f : shots) {
    double xg = 0.0;
    for (std::size_t g = 0; g < weights.size(); ++g) {
      if (weights[g] == 0.0) continue;
      xg += weights[g] * model.predict_as_group(f, representative_key(model.groups()[g]));
    }
    total += xg;
  }
  return total;
}

BaselineReport baseline_report(const MultiCalibratedModel& model, const ShotDataset& shots,
                               std::vector<double> weights, WeightBasis basis) {
  BaselineReport r;
  r.n_shots = shots.shots.size();
  r.basis = basis;
  std::vector<xg::FeatureVector> features;
  features.reserve(r.n_shots);
  for (const auto& s : shots.shots) {
    features.push_back(xg::extract_features(s));
    r.goals += s.is_goal ? 1.0 : 0.0;
    r.standard_xg += model.base().predict(features.back());
  }
  r.cumulative_xg.assign(model.groups().size(), 0.0);
  for (std::size_t g = 0; g < model.groups().size(); ++g) {
    const auto key = representative_key(model.groups()[g]);
    for (const auto& f : features) r.cumulative_xg[g] += model.predict_as_group(f, key);
  }
  r.weighted_average_xg = weighted_average_player(model, features, weights);
  r.weights = std::move(weights);
  return r;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DataError("spearman: need two aligned samples");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) throw DataError("spearman: constant ranking");
  return cov / std::sqrt(va * vb);
}

Leaderboard gax_leaderboard(const ShotDataset& season, std::span<const SubgroupKey> keys,
                            const MultiCalibratedModel& model,
                            const std::map<std::string, double>& provider_xg,
                            std::size_t min_goals) {
  if (keys.size() != season.shots.size()) throw DataError("leaderboard: one key per shot required");
  std::map<Id, LeaderboardRow> rows;
  std::map<Id, bool> provider_complete;
  for (std::size_t i = 0; i < season.shots.size(); ++i) {
    const auto& s = season.shots[i];
    if (s.player_id == kUnknownId) continue;
    auto& row = rows[s.player_id];
    row.player_id = s.player_id;
    const auto f = xg::extract_features(s);
    ++row.shots;
    row.goals += s.is_goal ? 1 : 0;
    row.standard_xg += model.base().predict(f);
    row.multicalibrated_xg += model.predict(f, keys[i]);
    auto complete = provider_complete.try_emplace(s.player_id, true).first;
    if (auto p = provider_xg.find(s.shot_id); p != provider_xg.end()) {
      row.provider_xg = row.provider_xg.value_or(0.0) + p->second;
    } else {
      complete->second = false;
    }
  }

  Leaderboard board;
  for (auto& [pid, row] : rows) {
    if (row.goals < min_goals) continue;
    if (!provider_complete[pid]) row.provider_xg.reset();
    if (auto p = season.players.find(pid); p != season.players.end()) row.name = p->second.name;
    board.rows.push_back(std::move(row));
  }
  std::sort(board.rows.begin(), board.rows.end(), [](const auto& a, const auto& b) {
    if (a.standard_gax() != b.standard_gax()) return a.standard_gax() > b.standard_gax();
    return a.player_id < b.player_id;
  });

  std::vector<std::pair<double, double>> std_pairs, mc_pairs, prov_pairs;
  std::vector<double> std_gax, mc_gax;
  bool all_provider = !board.rows.empty();
  for (const auto& r : board.rows) {
    const auto g = static_cast<double>(r.goals);
    std_pairs.emplace_back(g, r.standard_xg);
    mc_pairs.emplace_back(g, r.multicalibrated_xg);
    std_gax.push_back(r.standard_gax());
    mc_gax.push_back(r.multicalibrated_gax());
    if (r.provider_xg) prov_pairs.emplace_back(g, *r.provider_xg);
    else all_provider = false;
  }
  board.standard = summarize(std_pairs);
  board.multicalibrated = summarize(mc_pairs);
  if (all_provider) board.provider = summarize(prov_pairs);
  if (board.rows.size() >= 2) {
    try {
      board.spearman = spearman(std_gax, mc_gax);
    } catch (const DataError&) {
      board.spearman.reset();
    }
  }
  return board;
}

}  // namespace xgbias::mcal
