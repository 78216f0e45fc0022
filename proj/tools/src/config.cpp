#include "config.hpp"

#include <charconv>
#include <sstream>

#include <toml.hpp>

#include "xgbias/error.hpp"

namespace xgbias::cli {
namespace {

nlohmann::json node_to_json(const toml::node& node, const std::string& where) {
  if (const auto* t = node.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = node_to_json(v, std::string(k.str()));
    return j;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : *a) j.push_back(node_to_json(v, where));
    return j;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ConfigError("config: unsupported value type for '" + where + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty list entry in '" + text + "'");
    parts.push_back(item.substr(b, e - b + 1));
  }
  return parts;
}

double as_double(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>(), key);
  throw ConfigError(key + ": expected a number");
}

std::size_t as_size(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key + ": must be non-negative");
    return static_cast<std::size_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
      throw ConfigError(key + ": expected a non-negative integer");
    }
    return static_cast<std::size_t>(d);
  }
  if (v.is_string()) return static_cast<std::size_t>(parse_u64(v.get<std::string>(), key));
  throw ConfigError(key + ": expected a non-negative integer");
}

template <typename T, typename F>
std::vector<T> as_list(const nlohmann::json& v, const std::string& key, F convert) {
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(convert(item, key));
  } else if (v.is_string()) {
    for (const auto& item : split(v.get<std::string>(), ',')) out.push_back(convert(nlohmann::json(item), key));
  } else {
    out.push_back(convert(v, key));
  }
  if (out.empty()) throw ConfigError(key + ": list must not be empty");
  return out;
}

}  // namespace

nlohmann::json load_toml(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("--config: no such file " + path.string());
  }
  try {
    return node_to_json(toml::parse_file(path.string()), "");
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << path.string() << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
}

std::vector<double> get_doubles(const nlohmann::json& cfg, const std::string& key,
                                std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  return as_list<double>(cfg[key], key, as_double);
}

std::vector<std::size_t> get_sizes(const nlohmann::json& cfg, const std::string& key,
                                   std::vector<std::size_t> fallback) {
  if (!cfg.contains(key)) return fallback;
  return as_list<std::size_t>(cfg[key], key, as_size);
}

std::vector<std::vector<double>> get_allocations(const nlohmann::json& cfg, const std::string& key,
                                                 std::vector<std::vector<double>> fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg[key];
  std::vector<std::vector<double>> out;
  if (v.is_array()) {
    for (const auto& row : v) out.push_back(as_list<double>(row, key, as_double));
  } else if (v.is_string()) {
    // "100000:800000:50000:50000;50000:..." on the command line
    for (const auto& row : split(v.get<std::string>(), ';')) {
      std::vector<double> r;
      for (const auto& x : split(row, ':')) r.push_back(parse_double(x, key));
      out.push_back(r);
    }
  } else {
    throw ConfigError(key + ": expected a list of allocations");
  }
  if (out.empty()) throw ConfigError(key + ": list must not be empty");
  return out;
}

std::size_t get_size(const nlohmann::json& cfg, const std::string& key, std::size_t fallback) {
  return cfg.contains(key) ? as_size(cfg[key], key) : fallback;
}

double get_double(const nlohmann::json& cfg, const std::string& key, double fallback) {
  return cfg.contains(key) ? as_double(cfg[key], key) : fallback;
}

bool get_bool(const nlohmann::json& cfg, const std::string& key, bool fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg[key];
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw ConfigError(key + ": expected true or false");
}

std::string get_string(const nlohmann::json& cfg, const std::string& key, std::string fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_string()) throw ConfigError(key + ": expected a string");
  return cfg[key].get<std::string>();
}

std::uint64_t require_seed(const nlohmann::json& cfg) {
  if (!cfg.contains("seed")) {
    throw ConfigError("seed: this command is randomized and needs an explicit --seed");
  }
  const auto& v = cfg["seed"];
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) return parse_u64(v.get<std::string>(), "seed");
  throw ConfigError("seed: expected an unsigned 64-bit integer");
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field + ": expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

std::int64_t parse_i64(const std::string& text, const std::string& field) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(field + ": expected a number, got '" + text + "'");
}

}  // namespace xgbias::cli
