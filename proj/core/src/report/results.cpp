#include "xgbias/report/results.hpp"

#include <fstream>

#include <fmt/format.h>

#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"

namespace xgbias::report {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

void write_h1_csv(const std::filesystem::path& path, const sim::H1Result& result) {
  auto out = open_out(path);
  csv::write_row(out, {"alpha", "n", "mean_gax", "std_gax", "p_overperform", "se"});
  for (const auto& c : result.cells) {
    csv::write_row(out, {num(c.alpha), num(c.n), num(c.summary.mean_gax), num(c.summary.std_gax),
                         num(c.summary.p_overperform), num(c.summary.se)});
  }
}

void write_profiles_csv(const std::filesystem::path& path, const sim::PlayerProfileResult& result) {
  auto out = open_out(path);
  csv::write_row(out, {"player_id", "alpha", "n", "p_player", "p_global", "delta"});
  for (const auto& [player, cells] : result.players) {
    for (const auto& c : cells) {
      csv::write_row(out, {std::to_string(player), num(c.alpha), num(c.n), num(c.p_player),
                           num(c.p_global), num(c.delta())});
    }
  }
}

void write_augmentation_csv(const std::filesystem::path& path,
                            const sim::AugmentationResult& result) {
  auto out = open_out(path);
  csv::write_row(out, {"alpha", "m", "runs_ok", "failures", "mean_gax", "sd_gax", "ci95_low",
                       "ci95_high"});
  for (const auto& p : result.curve) {
    csv::write_row(out, {num(p.alpha), num(p.m), num(p.runs_ok), num(p.failures), num(p.mean_gax),
                         num(p.sd_gax), num(p.ci95_low), num(p.ci95_high)});
  }
}

void write_mixture_csv(const std::filesystem::path& path, const sim::MixtureResult& result) {
  auto out = open_out(path);
  csv::write_row(out, {"allocation", "proportions", "alpha_test", "n", "mean_gax", "se_gax",
                       "mean_truth_gax", "se_truth_gax"});
  for (std::size_t a = 0; a < result.allocations.size(); ++a) {
    const auto& alloc = result.allocations[a];
    std::string props;
    for (std::size_t i = 0; i < alloc.proportions.size(); ++i) {
      if (i) props += '|';
      props += num(alloc.proportions[i]);
    }
    for (const auto& c : alloc.cells) {
      csv::write_row(out, {num(a + 1), props, num(c.alpha_test), num(c.n), num(c.mean_gax),
                           num(c.se_gax), num(c.mean_truth_gax), num(c.se_truth_gax)});
    }
  }
}

void write_calibration_csv(const std::filesystem::path& path,
                           const subgroups::CalibrationCurve& curve) {
  auto out = open_out(path);
  csv::write_row(out, {"bin_lo", "bin_hi", "n", "mean_pred", "conv_rate", "masked", "smoothed_x",
                       "smoothed_y"});
  for (const auto& b : curve.bins) {
    csv::write_row(out, {num(b.lo), num(b.hi), num(b.n), num(b.mean_predicted),
                         num(b.conversion_rate), b.masked ? "1" : "0", opt(b.smoothed_x),
                         opt(b.smoothed_y)});
  }
}

void write_conversion_csv(const std::filesystem::path& path,
                          const subgroups::ConversionTable& table) {
  using subgroups::VolumeTier;
  auto out = open_out(path);
  csv::write_row(out, {"volume", "body_part", "band_lo", "band_hi", "n", "goals", "rate"});
  for (VolumeTier v : {VolumeTier::kLow, VolumeTier::kMid, VolumeTier::kHigh}) {
    for (BodyPart part : {BodyPart::kFoot, BodyPart::kHead}) {
      for (std::size_t b = 0; b < subgroups::kNumBands; ++b) {
        const auto& cell = table.at(v, part, b);
        const std::string hi =
            b + 1 < subgroups::kNumBands ? num(subgroups::kBandLowerEdges[b + 1]) : "inf";
        csv::write_row(out, {std::string(subgroups::to_string(v)), std::string(to_string(part)),
                             num(subgroups::kBandLowerEdges[b]), hi, num(cell.n), num(cell.goals),
                             opt(cell.rate())});
      }
    }
  }
}

void write_pmf_csv(const std::filesystem::path& path, const goals::GoalDistribution& dist) {
  auto out = open_out(path);
  csv::write_row(out, {"k", "probability"});
  for (std::size_t k = 0; k < dist.pmf.size(); ++k) csv::write_row(out, {num(k), num(dist.pmf[k])});
}

void write_baseline_matrix_csv(const std::filesystem::path& path,
                               const mcal::MultiCalibratedModel& model,
                               const mcal::BaselineReport& report) {
  using subgroups::VolumeTier;
  auto out = open_out(path);
  csv::write_row(out, {"position", "low", "mid", "high"});
  for (Position pos : {Position::kDefender, Position::kMidfielder, Position::kAttacker}) {
    csv::Row row{std::string(to_string(pos))};
    for (VolumeTier v : {VolumeTier::kLow, VolumeTier::kMid, VolumeTier::kHigh}) {
      std::string cell;
      for (std::size_t g = 0; g < model.groups().size(); ++g) {
        const auto& p = model.groups()[g];
        if (p.position == pos && p.volume == v && !p.team) {
          cell = num(report.cumulative_xg[g]);
          break;
        }
      }
      row.push_back(cell);
    }
    csv::write_row(out, row);
  }
}

void write_leaderboard_csv(const std::filesystem::path& path, const mcal::Leaderboard& board) {
  auto out = open_out(path);
  csv::write_row(out, {"rank", "player_id", "player", "goals", "shots", "provider_xg",
                       "provider_gax", "standard_xg", "standard_gax", "multicalibrated_xg",
                       "multicalibrated_gax"});
  for (std::size_t i = 0; i < board.rows.size(); ++i) {
    const auto& r = board.rows[i];
    csv::write_row(out, {num(i + 1), std::to_string(r.player_id), r.name, num(r.goals),
                         num(r.shots), opt(r.provider_xg), opt(r.provider_gax()),
                         num(r.standard_xg), num(r.standard_gax()), num(r.multicalibrated_xg),
                         num(r.multicalibrated_gax())});
  }
}

nlohmann::json leaderboard_summary(const mcal::Leaderboard& board) {
  auto summary = [](const mcal::OverperformanceSummary& s) {
    return nlohmann::json{{"exceeders", s.exceeders},
                          {"mean_overperformance_pct", s.mean_overperformance}};
  };
  nlohmann::json j{{"players", board.rows.size()},
                   {"standard", summary(board.standard)},
                   {"multicalibrated", summary(board.multicalibrated)}};
  j["provider"] = board.provider ? summary(*board.provider) : nlohmann::json();
  j["spearman"] = board.spearman ? nlohmann::json(*board.spearman) : nlohmann::json();
  return j;
}

nlohmann::json baseline_summary(const mcal::MultiCalibratedModel& model,
                                const mcal::BaselineReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t g = 0; g < model.groups().size(); ++g) {
    groups.push_back({{"group", model.groups()[g].describe()},
                      {"cumulative_xg", report.cumulative_xg[g]},
                      {"gax", report.gax(g)},
                      {"weight", report.weights[g]}});
  }
  const double weighted_gax = report.weighted_gax();
  const double standard_gax = report.standard_gax();
  nlohmann::json j{{"n_shots", report.n_shots},
                   {"goals", report.goals},
                   {"standard_xg", report.standard_xg},
                   {"standard_gax", standard_gax},
                   {"weight_basis", report.basis == mcal::WeightBasis::kPlayers ? "players" : "shots"},
                   {"weighted_average_xg", report.weighted_average_xg},
                   {"weighted_average_gax", weighted_gax},
                   {"groups", groups}};
  if (standard_gax != 0.0) j["gax_increase_pct"] = 100.0 * (weighted_gax - standard_gax) / standard_gax;
  return j;
}

}  // namespace xgbias::report
