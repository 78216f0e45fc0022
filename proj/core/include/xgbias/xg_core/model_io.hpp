#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "xgbias/xg_core/logistic.hpp"

namespace xgbias::xg {

// {feature_names[], weights[], intercept, penalty, meta{n_train, converged, iterations}}
nlohmann::json to_json(const XgModel& model);
XgModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const XgModel& model);
XgModel load_model(const std::filesystem::path& path);

}  // namespace xgbias::xg
