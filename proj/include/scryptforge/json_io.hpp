#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "scryptforge/error.hpp"

namespace scryptforge {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string(), "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string(), path.string() + ": " + e.what());
  }
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key))
    throw FormatError(key, "missing key '" + key + "'");
  return obj.at(key);
}

inline double require_number(const nlohmann::json& obj, const std::string& key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw FormatError(key, "key '" + key + "' must be a number");
  return v.get<double>();
}

inline double require_positive(const nlohmann::json& obj, const std::string& key) {
  const double v = require_number(obj, key);
  if (!(v > 0)) throw FormatError(key, "key '" + key + "' must be positive");
  return v;
}

inline std::uint64_t require_count(const nlohmann::json& obj, const std::string& key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw FormatError(key, "key '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

}  // namespace scryptforge
