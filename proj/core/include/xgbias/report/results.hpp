#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xgbias/goal_dist/poisson_binomial.hpp"
#include "xgbias/multicalibration/baselines.hpp"
#include "xgbias/sim/experiments.hpp"
#include "xgbias/subgroups/calibration.hpp"

namespace xgbias::report {

// Shortest round-trip decimal form; identical across runs and thread counts.
std::string format_number(double v);

// alpha,n,mean_gax,std_gax,p_overperform,se
void write_h1_csv(const std::filesystem::path& path, const sim::H1Result& result);
// player_id,alpha,n,p_player,p_global,delta
void write_profiles_csv(const std::filesystem::path& path, const sim::PlayerProfileResult& result);
// alpha,m,runs_ok,failures,mean_gax,sd_gax,ci95_low,ci95_high
void write_augmentation_csv(const std::filesystem::path& path, const sim::AugmentationResult& result);
// allocation,proportions,alpha_test,n,mean_gax,se_gax,mean_truth_gax,se_truth_gax
void write_mixture_csv(const std::filesystem::path& path, const sim::MixtureResult& result);
// bin_lo,bin_hi,n,mean_pred,conv_rate,masked,smoothed_x,smoothed_y
void write_calibration_csv(const std::filesystem::path& path,
                           const subgroups::CalibrationCurve& curve);
// volume,body_part,band_lo,band_hi,n,goals,rate
void write_conversion_csv(const std::filesystem::path& path,
                          const subgroups::ConversionTable& table);
// k,probability
void write_pmf_csv(const std::filesystem::path& path, const goals::GoalDistribution& dist);
// position,defender/midfielder/attacker rows x low,mid,high columns
void write_baseline_matrix_csv(const std::filesystem::path& path,
                               const mcal::MultiCalibratedModel& model,
                               const mcal::BaselineReport& report);
// rank,player_id,player,goals,shots,provider_xg,provider_gax,standard_xg,
// standard_gax,multicalibrated_xg,multicalibrated_gax
void write_leaderboard_csv(const std::filesystem::path& path, const mcal::Leaderboard& board);

nlohmann::json leaderboard_summary(const mcal::Leaderboard& board);
nlohmann::json baseline_summary(const mcal::MultiCalibratedModel& model,
                                const mcal::BaselineReport& report);

}  // namespace xgbias::report
