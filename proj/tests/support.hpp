#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#ifndef SCRYPTFORGE_FIXTURE_DIR
#error "SCRYPTFORGE_FIXTURE_DIR must be defined"
#endif

namespace testsupport {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(SCRYPTFORGE_FIXTURE_DIR) / name;
}

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(SCRYPTFORGE_DATA_DIR) / name;
}

inline const nlohmann::json& kernel_fixtures() {
  static const nlohmann::json j = [] {
    std::ifstream in(fixture_path("kernel_fixtures.json"));
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline std::string read_trimmed(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string s;
  in >> s;
  return s;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

}  // namespace testsupport
