#pragma once

// Die area and fabrication cost, mining revenue and break-even, cluster power
// comparisons, and the back-of-envelope attack/collision arithmetic.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "scryptforge/error.hpp"
#include "scryptforge/json_io.hpp"

namespace scryptforge {

// ---------------------------------------------------------------------------
// Die area and cost

struct DirectLogicArea {
  double area_um2 = 0;
};

struct GateCountLogic {
  std::uint64_t gate_count = 0;
  double avg_gate_area_um2 = 0;
};

struct DieModel {
  std::uint64_t cache_registers = 0;
  double cache_cell_area_um2 = 0;  // per register bit cell
  std::variant<DirectLogicArea, GateCountLogic> logic;
  double process_node_nm = 0;

  double cache_area_um2() const noexcept {
    return static_cast<double>(cache_registers) * cache_cell_area_um2;
  }

  double logic_area_um2() const noexcept {
    return std::visit(
        [](const auto& l) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(l)>, DirectLogicArea>)
            return l.area_um2;
          else
            return static_cast<double>(l.gate_count) * l.avg_gate_area_um2;
        },
        logic);
  }
};

inline double die_area_mm2(const DieModel& d) {
  if (d.cache_cell_area_um2 < 0 || d.logic_area_um2() < 0)
    throw ParameterError("die_area_mm2: areas must be non-negative");
  return (d.cache_area_um2() + d.logic_area_um2()) / 1e6;
}

struct EconScenario {
  double eur_per_mm2 = 0;
  double eur_usd_rate = 0;              // USD per EUR
  double revenue_usd_per_mhs_day = 0;   // USD per MH/s per day
  double asic_hashrate_mhs = 0;
  double power_w = 0;
  double electricity_usd_per_kwh = 0;  // 0 leaves power out of break-even
};

struct DieCost {
  double eur = 0;
  double usd = 0;
};

inline DieCost die_cost(double area_mm2, const EconScenario& s) {
  if (area_mm2 < 0 || s.eur_per_mm2 < 0 || s.eur_usd_rate < 0)
    throw ParameterError("die_cost: inputs must be non-negative");
  DieCost c;
  c.eur = area_mm2 * s.eur_per_mm2;
  c.usd = c.eur * s.eur_usd_rate;
  return c;
}

// ---------------------------------------------------------------------------
// Revenue and break-even

inline double revenue_per_day(const EconScenario& s) {
  if (s.asic_hashrate_mhs < 0 || s.revenue_usd_per_mhs_day < 0)
    throw ParameterError("revenue_per_day: inputs must be non-negative");
  return s.asic_hashrate_mhs * s.revenue_usd_per_mhs_day;
}

inline double power_cost_per_day(const EconScenario& s) {
  return s.power_w * 24.0 / 1000.0 * s.electricity_usd_per_kwh;
}

inline double net_revenue_per_day(const EconScenario& s) {
  return revenue_per_day(s) - power_cost_per_day(s);
}

inline double breakeven_days(double cost_usd, double revenue_usd_per_day) {
  if (!(revenue_usd_per_day > 0))
    throw ParameterError("breakeven_days: daily revenue must be positive");
  if (cost_usd < 0) throw ParameterError("breakeven_days: cost must be non-negative");
  return cost_usd / revenue_usd_per_day;
}

struct BreakevenPoint {
  std::uint64_t day = 0;
  double cumulative_net_usd = 0;
};

/// Cumulative revenue minus up-front cost for day 0..horizon_days.
inline std::vector<BreakevenPoint> breakeven_series(double cost_usd,
                                                    double revenue_usd_per_day,
                                                    std::uint64_t horizon_days) {
  std::vector<BreakevenPoint> out;
  out.reserve(horizon_days + 1);
  for (std::uint64_t d = 0; d <= horizon_days; ++d)
    out.push_back({d, revenue_usd_per_day * static_cast<double>(d) - cost_usd});
  return out;
}

// ---------------------------------------------------------------------------
// Cluster power

struct ClusterDesign {
  std::string name;
  std::uint64_t unit_hashrate = 0;  // H/s
  double unit_watts = 0;
};

struct ClusterRow {
  std::string name;
  std::uint64_t unit_hashrate = 0;
  double unit_watts = 0;
  std::uint64_t units_needed = 0;
  double total_watts = 0;
  double watts_per_mhs = 0;
};

struct ClusterComparison {
  std::uint64_t target_hashrate = 0;
  std::vector<ClusterRow> designs;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterDesign, name, unit_hashrate, unit_watts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterRow, name, unit_hashrate, unit_watts,
                                   units_needed, total_watts, watts_per_mhs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterComparison, target_hashrate, designs)

/// Smallest unit count per design whose combined rate reaches the target.
inline ClusterComparison cluster_power(std::uint64_t target_hashrate,
                                       const std::vector<ClusterDesign>& designs) {
  ClusterComparison out;
  out.target_hashrate = target_hashrate;
  for (const auto& d : designs) {
    if (d.unit_hashrate == 0)
      throw ParameterError("cluster_power: design '" + d.name + "' has zero hashrate");
    ClusterRow row;
    row.name = d.name;
    row.unit_hashrate = d.unit_hashrate;
    row.unit_watts = d.unit_watts;
    row.units_needed = target_hashrate / d.unit_hashrate +
                       (target_hashrate % d.unit_hashrate != 0 ? 1 : 0);
    row.total_watts = static_cast<double>(row.units_needed) * d.unit_watts;
    row.watts_per_mhs = d.unit_watts / (static_cast<double>(d.unit_hashrate) / 1e6);
    out.designs.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attack and collision arithmetic

namespace detail {

using u128 = unsigned __int128;

inline u128 checked_mul(u128 a, u128 b, const char* what) {
  if (a != 0 && b > std::numeric_limits<u128>::max() / a)
    throw ParameterError(std::string(what) + ": product overflows 128 bits");
  return a * b;
}

}  // namespace detail

/// Days of pure memory-access time to try every `combo_length`-word phrase
/// from a dictionary, at `accesses_per_password` accesses of `access_ns` each.
inline double bruteforce_attack_days(std::uint64_t dict_words, std::uint64_t combo_length,
                                     std::uint64_t accesses_per_password, double access_ns) {
  if (dict_words == 0 || combo_length == 0 || accesses_per_password == 0)
    throw ParameterError("bruteforce_attack_days: counts must be >= 1");
  if (!(access_ns >= 0))
    throw ParameterError("bruteforce_attack_days: access_ns must be non-negative");

  detail::u128 accesses = 1;
  for (std::uint64_t i = 0; i < combo_length; ++i)
    accesses = detail::checked_mul(accesses, dict_words, "bruteforce_attack_days");
  accesses = detail::checked_mul(accesses, accesses_per_password, "bruteforce_attack_days");

  constexpr long double kNsPerDay = 86400.0L * 1e9L;
  return static_cast<double>(static_cast<long double>(accesses) *
                             static_cast<long double>(access_ns) / kNsPerDay);
}

/// events / 2^hash_bits, exact in binary floating point.
inline long double collision_expectation(long double events_per_year, int hash_bits) {
  if (hash_bits < 0 || hash_bits > 512)
    throw ParameterError("collision_expectation: hash_bits must be in 0..512");
  if (events_per_year < 0)
    throw ParameterError("collision_expectation: events must be non-negative");
  return std::ldexp(events_per_year, -hash_bits);
}

// ---------------------------------------------------------------------------
// Presets

struct BruteforceParams {
  std::uint64_t dict_words = 0;
  std::uint64_t combo_length = 0;
  std::uint64_t accesses_per_password = 0;
  double access_ns = 0;
};

struct CollisionParams {
  double events_per_year = 0;
  int hash_bits = 0;
};

struct EconPreset {
  std::string name;
  DieModel die;
  EconScenario scenario;
  std::uint64_t cluster_target_hashrate = 0;
  std::vector<ClusterDesign> cluster_designs;
  BruteforceParams bruteforce;
  CollisionParams collision;
  std::uint64_t series_days = 120;
};

inline DieModel parse_die_model(const nlohmann::json& j) {
  using namespace detail;
  DieModel d;
  d.cache_registers = require_count(j, "cache_registers");
  d.cache_cell_area_um2 = require_number(j, "cache_cell_area_um2");
  d.process_node_nm = require_positive(j, "process_node_nm");
  const bool direct = j.contains("logic_area_um2");
  const bool gates = j.contains("logic_gate_count") || j.contains("avg_gate_area_um2");
  if (direct && gates)
    throw FormatError("logic_area_um2",
                      "give either logic_area_um2 or logic_gate_count/avg_gate_area_um2, not both");
  if (direct) {
    d.logic = DirectLogicArea{require_number(j, "logic_area_um2")};
  } else if (gates) {
    d.logic = GateCountLogic{require_count(j, "logic_gate_count"),
                             require_number(j, "avg_gate_area_um2")};
  } else {
    throw FormatError("logic_area_um2", "missing key 'logic_area_um2'");
  }
  return d;
}

inline EconScenario parse_econ_scenario(const nlohmann::json& j) {
  using namespace detail;
  EconScenario s;
  s.eur_per_mm2 = require_positive(j, "eur_per_mm2");
  s.eur_usd_rate = require_positive(j, "eur_usd_rate");
  s.revenue_usd_per_mhs_day = require_positive(j, "revenue_usd_per_mhs_day");
  s.asic_hashrate_mhs = require_positive(j, "asic_hashrate_mhs");
  s.power_w = require_positive(j, "power_w");
  if (j.contains("electricity_usd_per_kwh"))
    s.electricity_usd_per_kwh = require_number(j, "electricity_usd_per_kwh");
  return s;
}

inline EconPreset parse_econ_preset(const nlohmann::json& j) {
  using namespace detail;
  EconPreset p;
  p.name = j.value("name", std::string{"unnamed"});
  p.die = parse_die_model(require(j, "die"));
  p.scenario = parse_econ_scenario(require(j, "scenario"));

  const auto& cluster = require(j, "cluster");
  p.cluster_target_hashrate = require_count(cluster, "target_hashrate");
  for (const auto& d : require(cluster, "designs")) {
    ClusterDesign cd;
    cd.name = require(d, "name").get<std::string>();
    cd.unit_hashrate = require_count(d, "unit_hashrate");
    cd.unit_watts = require_positive(d, "unit_watts");
    p.cluster_designs.push_back(std::move(cd));
  }

  const auto& bf = require(j, "bruteforce");
  p.bruteforce.dict_words = require_count(bf, "dict_words");
  p.bruteforce.combo_length = require_count(bf, "combo_length");
  p.bruteforce.accesses_per_password = require_count(bf, "accesses_per_password");
  p.bruteforce.access_ns = require_number(bf, "access_ns");

  const auto& col = require(j, "collision");
  p.collision.events_per_year = require_number(col, "events_per_year");
  p.collision.hash_bits = static_cast<int>(require_count(col, "hash_bits"));

  if (j.contains("series_days")) p.series_days = require_count(j, "series_days");
  return p;
}

inline EconPreset load_econ_preset(const std::filesystem::path& path) {
  return parse_econ_preset(read_json_file(path));
}

}  // namespace scryptforge
