#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xgbias::cli {

// TOML document as JSON (tables -> objects). Dates are rejected.
nlohmann::json load_toml(const std::filesystem::path& path);

// Typed reads from a merged config. Values may be native JSON or, when they
// came from command-line flags, strings such as "0,5,10".
std::vector<double> get_doubles(const nlohmann::json& cfg, const std::string& key,
                                std::vector<double> fallback);
std::vector<std::size_t> get_sizes(const nlohmann::json& cfg, const std::string& key,
                                   std::vector<std::size_t> fallback);
std::vector<std::vector<double>> get_allocations(const nlohmann::json& cfg, const std::string& key,
                                                 std::vector<std::vector<double>> fallback);
std::size_t get_size(const nlohmann::json& cfg, const std::string& key, std::size_t fallback);
double get_double(const nlohmann::json& cfg, const std::string& key, double fallback);
bool get_bool(const nlohmann::json& cfg, const std::string& key, bool fallback);
std::string get_string(const nlohmann::json& cfg, const std::string& key, std::string fallback);
// Required 64-bit seed; throws ConfigError naming the key when absent.
std::uint64_t require_seed(const nlohmann::json& cfg);

std::uint64_t parse_u64(const std::string& text, const std::string& field);
std::int64_t parse_i64(const std::string& text, const std::string& field);
double parse_double(const std::string& text, const std::string& field);

}  // namespace xgbias::cli
