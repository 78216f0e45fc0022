#include <gtest/gtest.h>

#include <cmath>

#include "synthetic.hpp"
#include "xgbias/error.hpp"
#include "xgbias/goal_dist/poisson_binomial.hpp"
#include "xgbias/goal_dist/shot_filter.hpp"
#include "xgbias/rng.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::goals {
namespace {

// P(k goals) by enumerating every goal/miss pattern.
std::vector<double> brute_force(const std::vector<double>& p) {
  std::vector<double> pmf(p.size() + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << p.size()); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) prob *= (mask >> i & 1u) ? p[i] : 1.0 - p[i];
    pmf[static_cast<std::size_t>(__builtin_popcount(mask))] += prob;
  }
  return pmf;
}

TEST(PoissonBinomial, SmallHandWorkedCase) {
  const auto d = poisson_binomial(std::vector<double>{0.1, 0.2, 0.5});
  ASSERT_EQ(d.pmf.size(), 4u);
  EXPECT_NEAR(d.pmf[0], 0.36, 1e-15);
  EXPECT_NEAR(d.pmf[1], 0.49, 1e-15);
  EXPECT_NEAR(d.pmf[2], 0.14, 1e-15);
  EXPECT_NEAR(d.pmf[3], 0.01, 1e-15);
  EXPECT_NEAR(d.mean(), 0.8, 1e-14);
  EXPECT_NEAR(d.variance(), 0.09 + 0.16 + 0.25, 1e-14);
  EXPECT_NEAR(d.total_xg, 0.8, 1e-15);
}

TEST(PoissonBinomial, MatchesEnumeration) {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 15);
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform();
    const auto d = poisson_binomial(p);
    const auto ref = brute_force(p);
    for (std::size_t k = 0; k <= n; ++k) ASSERT_NEAR(d.pmf[k], ref[k], 1e-12);
  }
}

TEST(PoissonBinomial, DegenerateInputs) {
  const auto empty = poisson_binomial(std::vector<double>{});
  ASSERT_EQ(empty.pmf.size(), 1u);
  EXPECT_EQ(empty.pmf[0], 1.0);
  const auto certain = poisson_binomial(std::vector<double>{1.0, 0.0, 1.0});
  EXPECT_EQ(certain.pmf[2], 1.0);
  EXPECT_THROW(poisson_binomial(std::vector<double>{0.2, 1.5}), DataError);
  EXPECT_THROW(poisson_binomial(std::vector<double>{-0.1}), DataError);
  EXPECT_THROW(poisson_binomial(std::vector<double>{std::nan("")}), DataError);
}

TEST(PoissonBinomial, LargeSetsStayNormalised) {
  std::vector<double> p(1862);
  Rng rng(8);
  for (auto& v : p) v = 0.25 * rng.uniform();
  const auto d = poisson_binomial(p);
  double total = 0;
  for (double v : d.pmf) {
    ASSERT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(d.mean(), d.total_xg, 1e-9);
}

TEST(Tails, BothTailsIncludeTheObservedCount) {
  const auto d = poisson_binomial(std::vector<double>{0.1, 0.2, 0.5});
  const auto t = tail_probabilities(d, 1);
  EXPECT_NEAR(t.p_at_most, 0.85, 1e-15);
  EXPECT_NEAR(t.p_at_least, 0.64, 1e-15);
  EXPECT_EQ(tail_probabilities(d, 0).p_at_least, 1.0);
  EXPECT_EQ(tail_probabilities(d, 3).p_at_most, 1.0);
  EXPECT_THROW(tail_probabilities(d, 4), DataError);
}

ShotRecord shot_at(double x, double y, BodyPart part, bool deflected) {
  ShotRecord s;
  s.start_x = x;
  s.start_y = y;
  s.body_part = part;
  s.is_deflected = deflected;
  return s;
}

TEST(Filter, ParsesSpecification) {
  const auto f = parse_filter("deflected=exclude,band=25-35yd,body=foot|head");
  EXPECT_TRUE(f.exclude_deflected);
  ASSERT_TRUE(f.distance_band);
  EXPECT_EQ(f.distance_band->unit, LengthUnit::kYards);
  EXPECT_EQ(f.body_parts, (std::set<BodyPart>{BodyPart::kFoot, BodyPart::kHead}));
  EXPECT_TRUE(parse_filter("").empty());
  EXPECT_THROW(parse_filter("band=30-20m"), ConfigError);
  EXPECT_THROW(parse_filter("band=20-30"), ConfigError);
  EXPECT_THROW(parse_filter("colour=red"), ConfigError);
  EXPECT_THROW(parse_filter("body=knee"), ConfigError);
}

TEST(Filter, YardBandIsHalfOpenInMeters) {
  const DistanceBand band(25, 35, LengthUnit::kYards);
  EXPECT_TRUE(band.contains_meters(25 * xg::kMetersPerYard));
  EXPECT_FALSE(band.contains_meters(35 * xg::kMetersPerYard));
  EXPECT_TRUE(band.contains_meters(30 * xg::kMetersPerYard));
  EXPECT_FALSE(band.contains_meters(24.9 * xg::kMetersPerYard));
}

TEST(Filter, ChargesFirstFailingCriterionAndIsIdempotent) {
  const auto f = parse_filter("deflected=exclude,body=foot,band=0-20m");
  std::vector<ScoredRecord> shots = {
      {shot_at(108, 40, BodyPart::kFoot, false), 0.3},   // kept
      {shot_at(108, 40, BodyPart::kHead, true), 0.2},    // deflected
      {shot_at(108, 40, BodyPart::kHead, false), 0.2},   // body part
      {shot_at(80, 40, BodyPart::kFoot, false), 0.05},   // 35 m out
  };
  const auto once = filter_shots(shots, f);
  EXPECT_EQ(once.report.kept, 1u);
  EXPECT_EQ(once.report.removed_deflected, 1u);
  EXPECT_EQ(once.report.removed_body_part, 1u);
  EXPECT_EQ(once.report.removed_distance, 1u);
  const auto twice = filter_shots(once.shots, f);
  EXPECT_EQ(twice.shots.size(), once.shots.size());
  EXPECT_EQ(twice.report.kept, once.report.kept);

  ShotFilter custom;
  custom.custom = [](const ShotRecord& s) { return s.start_x > 100; };
  EXPECT_EQ(filter_shots(shots, custom).report.removed_custom, 1u);
}

}  // namespace
}  // namespace xgbias::goals
