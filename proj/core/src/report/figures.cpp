#include "xgbias/report/figures.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "xgbias/csv.hpp"
#include "xgbias/error.hpp"
#include "xgbias/report/results.hpp"
#include "xgbias/shot_sampler/sampler.hpp"

namespace xgbias::report {
namespace {

using Rows = std::vector<csv::Row>;
using Builder = std::function<Rows(const std::vector<std::filesystem::path>&)>;

struct Figure {
  std::vector<std::string> columns;
  Builder build;
  bool many_inputs = false;
};

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("figure: bad number '" + s + "' in column " + what);
  }
}

// Copies the named columns in order.
Builder project(std::vector<std::string> columns) {
  return [columns](const std::vector<std::filesystem::path>& inputs) {
    const auto table = csv::Table::from_file(inputs.front());
    std::vector<std::size_t> idx;
    for (const auto& c : columns) idx.push_back(table.column(c));
    Rows rows;
    for (std::size_t i = 0; i < table.size(); ++i) {
      csv::Row row;
      for (std::size_t k : idx) row.push_back(table.row(i)[k]);
      rows.push_back(std::move(row));
    }
    return rows;
  };
}

Rows consistency(const std::vector<std::filesystem::path>& inputs) {
  constexpr int kSeasons = 5;
  const auto table = csv::Table::from_file(inputs.front());
  Rows rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double p = to_double(table.at(i, "p_overperform"), "p_overperform");
    for (int k = 1; k <= kSeasons; ++k) {
      rows.push_back({table.at(i, "alpha"), table.at(i, "n"), table.at(i, "p_overperform"),
                      std::to_string(k), std::to_string(kSeasons),
                      format_number(sampler::consistency_probability(p, k, kSeasons))});
    }
  }
  return rows;
}

Rows calibration(const std::vector<std::filesystem::path>& inputs) {
  Rows rows;
  for (const auto& path : inputs) {
    const auto table = csv::Table::from_file(path);
    const std::string group = path.stem().string();
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table.at(i, "masked") == "1") continue;
      const double center = 0.5 * (to_double(table.at(i, "bin_lo"), "bin_lo") +
                                   to_double(table.at(i, "bin_hi"), "bin_hi"));
      rows.push_back({group, format_number(center), table.at(i, "n"), table.at(i, "smoothed_x"),
                      table.at(i, "smoothed_y")});
    }
  }
  return rows;
}

Rows conversion(const std::vector<std::filesystem::path>& inputs) {
  const auto table = csv::Table::from_file(inputs.front());
  Rows rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string band = table.at(i, "band_lo") + "-" + table.at(i, "band_hi");
    rows.push_back({table.at(i, "volume"), table.at(i, "body_part"), band, table.at(i, "n"),
                    table.at(i, "rate")});
  }
  return rows;
}

Rows matrix_3x3(const std::vector<std::filesystem::path>& inputs) {
  const auto table = csv::Table::from_file(inputs.front());
  Rows rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (const char* v : {"low", "mid", "high"}) {
      rows.push_back({table.at(i, "position"), v, table.at(i, v)});
    }
  }
  if (rows.size() != 9) {
    throw DataError("figure messi-3x3: expected 3 position rows, found " +
                    std::to_string(table.size()));
  }
  return rows;
}

const std::map<std::string, Figure>& catalogue() {
  static const std::map<std::string, Figure> figures = [] {
    std::map<std::string, Figure> f;
    f["h1-heatmap"] = {{"alpha", "n", "p_overperform"}, project({"alpha", "n", "p_overperform"})};
    f["h1-table"] = {{"alpha", "n", "mean_gax", "std_gax"},
                     project({"alpha", "n", "mean_gax", "std_gax"})};
    f["consistency"] = {{"alpha", "n", "p_season", "k", "m", "p_consistent"}, consistency};
    f["profiles"] = {{"player_id", "alpha", "n", "delta"},
                     project({"player_id", "alpha", "n", "delta"})};
    f["h3a"] = {{"alpha", "m", "mean_gax", "ci95_low", "ci95_high"},
                project({"alpha", "m", "mean_gax", "ci95_low", "ci95_high"})};
    f["h3b"] = {{"allocation", "alpha_test", "n", "mean_gax", "se_gax"},
                project({"allocation", "alpha_test", "n", "mean_gax", "se_gax"})};
    f["calibration"] = {{"group", "bin_center", "n", "smoothed_x", "smoothed_y"}, calibration, true};
    f["conversion"] = {{"volume", "body_part", "band", "n", "rate"}, conversion};
    f["messi-3x3"] = {{"position", "volume", "cum_xg"}, matrix_3x3};
    f["leaderboard"] = {
        {"rank", "player", "goals", "provider_gax", "standard_gax", "multicalibrated_gax"},
        project({"rank", "player", "goals", "provider_gax", "standard_gax", "multicalibrated_gax"})};
    return f;
  }();
  return figures;
}

const Figure& lookup(const std::string& id) {
  const auto& all = catalogue();
  auto it = all.find(id);
  if (it == all.end()) {
    std::string available;
    for (const auto& name : figure_ids()) available += (available.empty() ? "" : ", ") + name;
    throw ConfigError("unknown figure id '" + id + "'; available: " + available);
  }
  return it->second;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"h1-heatmap", "h1-table",    "consistency",
                                               "profiles",   "h3a",         "h3b",
                                               "calibration", "conversion", "messi-3x3",
                                               "leaderboard"};
  return ids;
}

std::vector<std::string> figure_columns(const std::string& id) { return lookup(id).columns; }

void emit_figure_data(const std::string& id, const std::vector<std::filesystem::path>& inputs,
                      const std::filesystem::path& out) {
  const Figure& figure = lookup(id);
  if (inputs.empty() || (!figure.many_inputs && inputs.size() != 1)) {
    throw ConfigError("figure " + id + ": expected " +
                      (figure.many_inputs ? std::string("one or more") : std::string("exactly one")) +
                      " input file, got " + std::to_string(inputs.size()));
  }
  const Rows rows = figure.build(inputs);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw DataError("cannot write " + out.string());
  csv::write_row(file, figure.columns);
  for (const auto& row : rows) csv::write_row(file, row);
}

}  // namespace xgbias::report
