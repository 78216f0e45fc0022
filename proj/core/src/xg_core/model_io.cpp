#include "xgbias/xg_core/model_io.hpp"

#include <fstream>

#include "xgbias/error.hpp"

namespace xgbias::xg {

nlohmann::json to_json(const XgModel& model) {
  nlohmann::json j;
  j["feature_names"] = kFeatureNames;
  j["weights"] = model.weights();
  j["intercept"] = model.intercept();
  j["penalty"] = model.penalty_c();
  const auto& m = model.meta();
  j["meta"] = {{"n_train", m.n_train},
               {"converged", m.converged},
               {"iterations", m.iterations},
               {"gradient_max_norm", m.gradient_max_norm}};
  return j;
}

XgModel model_from_json(const nlohmann::json& j) {
  try {
    const auto names = j.at("feature_names").get<std::vector<std::string>>();
    if (names.size() != kNumFeatures) throw DataError("model: wrong feature count");
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      if (names[i] != kFeatureNames[i]) {
        throw DataError("model: feature " + std::to_string(i) + " is '" + names[i] +
                        "', expected '" + std::string(kFeatureNames[i]) + "'");
      }
    }
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != kNumFeatures) throw DataError("model: wrong weight count");
    std::array<double, kNumFeatures> weights;
    std::copy(w.begin(), w.end(), weights.begin());
    TrainingMeta meta;
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      meta.n_train = m.value("n_train", std::size_t{0});
      meta.converged = m.value("converged", false);
      meta.iterations = m.value("iterations", 0);
      meta.gradient_max_norm = m.value("gradient_max_norm", 0.0);
    }
    return XgModel(weights, j.at("intercept").get<double>(), j.value("penalty", 1.0), meta);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const XgModel& model) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(model).dump(2) << '\n';
}

XgModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model " + path.string());
  try {
    return model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace xgbias::xg
