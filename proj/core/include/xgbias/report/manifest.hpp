#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xgbias::report {

inline constexpr const char* kToolVersion = "0.1.0";

// Lower-case hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

struct InputFile {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;  // e.g. "simulate h1"
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();  // resolved configuration
  std::vector<InputFile> inputs;
  std::vector<std::string> outputs;  // relative to the output directory
  std::string tool_version = kToolVersion;
  double duration_seconds = 0.0;
  std::string status = "ok";  // "ok" or "partial"

  // Hashes `path` now and records it.
  void add_input(const std::filesystem::path& path);
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest load_manifest(const std::filesystem::path& path);

// Inputs that are missing or whose content no longer matches the recorded
// hash. Empty when the manifest can be replayed as is.
std::vector<std::string> changed_inputs(const RunManifest& manifest);

}  // namespace xgbias::report
