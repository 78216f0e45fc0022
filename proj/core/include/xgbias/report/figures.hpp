#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace xgbias::report {

// Ids understood by emit_figure_data, in display order.
const std::vector<std::string>& figure_ids();

// Output columns of a figure table. Throws ConfigError for an unknown id.
std::vector<std::string> figure_columns(const std::string& id);

// Reads result CSVs written by the experiment commands and writes one tidy
// table for the figure:
//   h1-heatmap   alpha,n,p_overperform            from an h1 result
//   h1-table     alpha,n,mean_gax,std_gax         from an h1 result
//   consistency  alpha,n,p_season,k,m,p_consistent  (m = 5 seasons, k = 1..5)
//   profiles     player_id,alpha,n,delta          from a profiles result
//   h3a          alpha,m,mean_gax,ci95_low,ci95_high
//   h3b          allocation,alpha_test,n,mean_gax,se_gax
//   calibration  group,bin_center,n,smoothed_x,smoothed_y  unmasked bins, one
//                group per input file (named by file stem)
//   conversion   volume,body_part,band,n,rate
//   messi-3x3    position,volume,cum_xg           from a baseline matrix
//   leaderboard  rank,player,goals,provider_gax,standard_gax,multicalibrated_gax
// Throws ConfigError listing the available ids for an unknown id, or when the
// wrong number of inputs is given; DataError when an input lacks a column.
void emit_figure_data(const std::string& id, const std::vector<std::filesystem::path>& inputs,
                      const std::filesystem::path& out);

}  // namespace xgbias::report
