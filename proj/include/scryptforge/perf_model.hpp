#pragma once

// Analytical throughput model of a single-core scrypt ASIC, plus the memory
// technology catalog and the cache characterization it is clocked against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "scryptforge/error.hpp"
#include "scryptforge/json_io.hpp"
#include "scryptforge/scrypt.hpp"

namespace scryptforge {

// ---------------------------------------------------------------------------
// Cycle model

/// Cycle accounting for one salsa call: one cycle to ingest the 128-byte
/// operand, then each double round is two halves (columns, rows) of four
/// dependent sections whose four statements run in parallel, then one cycle
/// of write-back.
struct AsicCycleModel {
  std::uint64_t cycles_ingest_per_salsa = 1;
  std::uint64_t parallel_sections_per_half = 4;
  std::uint64_t halves_per_round_pair = 2;
  std::uint64_t round_pairs = 4;
  std::uint64_t cycles_writeback = 1;
  std::uint64_t salsa_calls_per_hash = kSalsaCallsPerHash;
  double clock_period_ns = 1.0;
  // Extra memory-latency cycles per hash. Zero reproduces the bare count.
  std::uint64_t stall_cycles_per_hash = 0;

  void validate() const {
    if (parallel_sections_per_half == 0 || halves_per_round_pair == 0 ||
        round_pairs == 0 || salsa_calls_per_hash == 0)
      throw ParameterError("AsicCycleModel: section, half, round and call counts must be >= 1");
    if (!(clock_period_ns > 0))
      throw ParameterError("AsicCycleModel: clock_period_ns must be positive");
  }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AsicCycleModel, cycles_ingest_per_salsa,
                                                parallel_sections_per_half,
                                                halves_per_round_pair, round_pairs,
                                                cycles_writeback, salsa_calls_per_hash,
                                                clock_period_ns, stall_cycles_per_hash)

inline std::uint64_t salsa_cycles(const AsicCycleModel& m) {
  m.validate();
  return m.cycles_ingest_per_salsa +
         m.halves_per_round_pair * m.parallel_sections_per_half * m.round_pairs +
         m.cycles_writeback;
}

inline std::uint64_t hash_cycles(const AsicCycleModel& m) {
  return salsa_cycles(m) * m.salsa_calls_per_hash + m.stall_cycles_per_hash;
}

/// floor(1e9 / (cycles_per_hash * clock_period_ns)) hashes per second.
inline std::uint64_t theoretical_hashrate(const AsicCycleModel& m) {
  const long double ns_per_hash =
      static_cast<long double>(hash_cycles(m)) * static_cast<long double>(m.clock_period_ns);
  return static_cast<std::uint64_t>(std::floor(1e9L / ns_per_hash));
}

/// One hash per pass through a combinational path of `path_ns`.
inline std::uint64_t critical_path_hashrate(double path_ns) {
  if (!(path_ns > 0)) throw ParameterError("critical_path_hashrate: path must be positive");
  return static_cast<std::uint64_t>(std::floor(1e9L / static_cast<long double>(path_ns)));
}

// ---------------------------------------------------------------------------
// Memory technologies

struct MemoryTech {
  std::string name;
  std::optional<double> read_ns;
  std::optional<double> write_ns;
  bool is_volatile = false;
  std::string notes;
  std::optional<double> cell_area_um2_per_bit;
  // Technologies quoted as a latency band; read/write are the evaluation point.
  std::optional<std::pair<double, double>> latency_range_ns;

  bool quantifiable() const noexcept { return read_ns || write_ns; }

  /// Worst of the known latencies.
  std::optional<double> effective_latency_ns() const noexcept {
    if (read_ns && write_ns) return std::max(*read_ns, *write_ns);
    if (read_ns) return read_ns;
    return write_ns;
  }
};

inline MemoryTech parse_memory_tech(const nlohmann::json& j) {
  using detail::require;
  MemoryTech t;
  const auto& name = require(j, "name");
  if (!name.is_string()) throw FormatError("name", "key 'name' must be a string");
  t.name = name.get<std::string>();

  auto latency = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const double v = detail::require_number(j, key);
    if (!(v > 0)) throw FormatError(key, t.name + ": '" + key + "' must be positive");
    return v;
  };
  t.read_ns = latency("read_ns");
  t.write_ns = latency("write_ns");
  t.cell_area_um2_per_bit = latency("cell_area_um2_per_bit");

  if (j.contains("latency_range_ns") && !j.at("latency_range_ns").is_null()) {
    const auto& r = j.at("latency_range_ns");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
      throw FormatError("latency_range_ns", t.name + ": latency_range_ns must be [lo, hi]");
    const double lo = r[0].get<double>();
    const double hi = r[1].get<double>();
    if (!(lo > 0 && hi >= lo))
      throw FormatError("latency_range_ns", t.name + ": need 0 < lo <= hi");
    t.latency_range_ns = std::pair{lo, hi};
    const double at = j.contains("evaluation_ns") ? detail::require_positive(j, "evaluation_ns")
                                                  : (lo + hi) / 2;
    if (!t.read_ns) t.read_ns = at;
    if (!t.write_ns) t.write_ns = at;
  }

  t.is_volatile = j.value("volatile", false);
  t.notes = j.value("notes", std::string{});
  return t;
}

inline std::vector<MemoryTech> parse_memory_catalog(const nlohmann::json& j) {
  const auto& list = detail::require(j, "technologies");
  if (!list.is_array()) throw FormatError("technologies", "'technologies' must be an array");
  std::vector<MemoryTech> out;
  for (const auto& item : list) out.push_back(parse_memory_tech(item));
  return out;
}

inline std::vector<MemoryTech> load_memory_catalog(const std::filesystem::path& path) {
  return parse_memory_catalog(read_json_file(path));
}

/// Highest clock a memory allows when every cycle performs one read.
inline double max_clock_ghz(const MemoryTech& t) {
  if (!t.read_ns) throw NotQuantifiableError(t.name, "no read latency available");
  return 1.0 / *t.read_ns;
}

struct RankedTech {
  std::string name;
  double effective_latency_ns = 0;
  std::optional<double> read_ns;
  std::optional<double> write_ns;
  std::optional<double> max_clock_ghz;
  double slowdown_vs_fastest = 1;
};

struct MemoryRanking {
  std::vector<RankedTech> ranked;
  std::vector<MemoryTech> unranked;
};

/// Quantifiable technologies fastest first (ties by name); the rest are
/// returned separately with their notes.
inline MemoryRanking rank_memory_techs(const std::vector<MemoryTech>& catalog) {
  if (catalog.empty()) throw ParameterError("rank_memory_techs: catalog is empty");
  MemoryRanking out;
  for (const auto& t : catalog) {
    if (!t.quantifiable()) {
      out.unranked.push_back(t);
      continue;
    }
    RankedTech r;
    r.name = t.name;
    r.effective_latency_ns = *t.effective_latency_ns();
    r.read_ns = t.read_ns;
    r.write_ns = t.write_ns;
    if (t.read_ns) r.max_clock_ghz = 1.0 / *t.read_ns;
    out.ranked.push_back(std::move(r));
  }
  std::ranges::sort(out.ranked, [](const RankedTech& a, const RankedTech& b) {
    if (a.effective_latency_ns != b.effective_latency_ns)
      return a.effective_latency_ns < b.effective_latency_ns;
    return a.name < b.name;
  });
  if (!out.ranked.empty()) {
    const double fastest = out.ranked.front().effective_latency_ns;
    for (auto& r : out.ranked) r.slowdown_vs_fastest = r.effective_latency_ns / fastest;
  }
  std::ranges::sort(out.unranked, {}, &MemoryTech::name);
  return out;
}

// ---------------------------------------------------------------------------
// Cache characterization

struct CacheSpec {
  double access_time_ns = 0;
  double cycle_time_ns = 0;
  double dynamic_read_energy_nj = 0;
  double leakage_mw = 0;
  double data_area_mm2 = 0;
  std::uint64_t bank_size_bytes = 0;
  std::uint64_t associativity = 0;
  std::uint64_t block_size_bytes = 0;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CacheSpec, access_time_ns, cycle_time_ns,
                                   dynamic_read_energy_nj, leakage_mw, data_area_mm2,
                                   bank_size_bytes, associativity, block_size_bytes)

inline CacheSpec parse_cacti_summary(const nlohmann::json& j) {
  using namespace detail;
  CacheSpec c;
  c.access_time_ns = require_positive(j, "access_time_ns");
  c.cycle_time_ns = require_positive(j, "cycle_time_ns");
  c.dynamic_read_energy_nj = require_positive(j, "dynamic_read_energy_nj");
  c.leakage_mw = require_positive(j, "leakage_mw");
  c.data_area_mm2 = require_positive(j, "data_area_mm2");
  auto positive_count = [&](const char* key) {
    const auto v = require_count(j, key);
    if (v == 0) throw FormatError(key, std::string("key '") + key + "' must be positive");
    return v;
  };
  c.bank_size_bytes = positive_count("bank_size_bytes");
  c.associativity = positive_count("associativity");
  c.block_size_bytes = positive_count("block_size_bytes");
  return c;
}

inline CacheSpec load_cacti_summary(const std::filesystem::path& path) {
  return parse_cacti_summary(read_json_file(path));
}

}  // namespace scryptforge
