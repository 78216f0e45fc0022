#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "xgbias/shot_data/types.hpp"

namespace xgbias::data {

// Fixed cache header; the column order is part of the file format.
inline constexpr const char* kShotCacheHeader =
    "shot_id,match_id,player_id,team_id,minute,start_x,start_y,body_part,is_goal,is_open_play,"
    "is_deflected";

// Sidecar paths next to a cache file: <stem>.players.csv, <stem>.teams.csv,
// <stem>.provider_xg.csv.
std::filesystem::path players_sidecar(const std::filesystem::path& cache);
std::filesystem::path teams_sidecar(const std::filesystem::path& cache);
std::filesystem::path provider_xg_sidecar(const std::filesystem::path& cache);

// Writes the shot cache and its player/team sidecars (and the provider xG
// sidecar when `provider_xg` is non-empty). Output is byte-deterministic.
void write_shot_cache(const std::filesystem::path& cache, const ShotDataset& dataset,
                      const std::map<std::string, double>& provider_xg = {});

// Reads a cache. Missing sidecars are tolerated: player profiles are then
// rebuilt from the shots with zero minutes and the default position.
ShotDataset read_shot_cache(const std::filesystem::path& cache);

std::map<std::string, double> read_provider_xg(const std::filesystem::path& cache);

}  // namespace xgbias::data
