#pragma once

// Command-line front end. run() is separate from main() so tests can drive
// it with in-memory streams.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scryptforge/econ.hpp"
#include "scryptforge/error.hpp"
#include "scryptforge/hashcore.hpp"
#include "scryptforge/instrumentation.hpp"
#include "scryptforge/json_io.hpp"
#include "scryptforge/miner.hpp"
#include "scryptforge/perf_model.hpp"
#include "scryptforge/scrypt.hpp"

#ifndef SCRYPTFORGE_DATA_DIR
#define SCRYPTFORGE_DATA_DIR "data"
#endif

namespace scryptforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv, Table };

struct RunConfig {
  std::string subcommand;
  Format output_format = Format::Json;
  std::optional<std::string> preset_path;
  std::optional<std::uint64_t> seed;
};

// ---------------------------------------------------------------------------
// Argument helpers

inline std::uint32_t parse_u32(std::string_view token) {
  std::uint32_t v = 0;
  const auto* end = token.data() + token.size();
  const auto [p, ec] = std::from_chars(token.data(), end, v);
  if (token.empty() || ec != std::errc{} || p != end)
    throw UsageError("invalid 32-bit unsigned integer '" + std::string(token) + "'");
  return v;
}

inline std::pair<Word32, Word32> parse_nonce_range(std::string_view token) {
  const auto dots = token.find("..");
  if (dots == std::string_view::npos)
    throw UsageError("nonce range '" + std::string(token) + "' must look like a..b");
  const Word32 a = parse_u32(token.substr(0, dots));
  const Word32 b = parse_u32(token.substr(dots + 2));
  if (a > b)
    throw UsageError("nonce range '" + std::string(token) + "' is empty (start > end)");
  return {a, b};
}

inline std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Finds a data file: as given, then in $SCRYPTFORGE_PRESET_DIR, then in the
/// bundled data directory.
inline fs::path resolve_data_file(const std::string& name) {
  if (fs::is_regular_file(name)) return name;
  if (const char* dir = std::getenv("SCRYPTFORGE_PRESET_DIR")) {
    const fs::path p = fs::path(dir) / name;
    if (fs::is_regular_file(p)) return p;
  }
  const fs::path bundled = fs::path(SCRYPTFORGE_DATA_DIR) / name;
  if (fs::is_regular_file(bundled)) return bundled;
  throw UsageError("cannot read file '" + name + "'");
}

inline BlockHeader parse_header_text(const std::string& text, const std::string& origin) {
  const std::string hex = trim(text);
  try {
    return header_from_hex(hex);
  } catch (const FormatError& e) {
    throw UsageError("malformed header hex in '" + origin + "': " + e.what());
  }
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Rounded human display of a rate, e.g. 7180 -> "7.18 KH/s".
inline std::string display_rate(double hs) {
  const char* units[] = {"H/s", "KH/s", "MH/s", "GH/s"};
  int u = 0;
  while (hs >= 1000 && u < 3) {
    hs /= 1000;
    ++u;
  }
  std::ostringstream os;
  os << std::setprecision(3) << hs << ' ' << units[u];
  return os.str();
}

inline void print_table(std::ostream& out,
                        const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(int(width) + 2) << k << v << '\n';
}

inline void print_kv_csv(std::ostream& out,
                         const std::vector<std::pair<std::string, std::string>>& rows) {
  out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
}

inline std::string json_scalar(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// Flat object → key/value rows (nested values are dumped as JSON).
inline std::vector<std::pair<std::string, std::string>> rows_of(const json& obj) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [k, v] : obj.items()) rows.emplace_back(k, json_scalar(v));
  return rows;
}

// ---------------------------------------------------------------------------
// Subcommands

inline void cmd_hash(const RunConfig& cfg, const std::string& arg, std::istream& in,
                     std::ostream& out) {
  std::string hex;
  if (arg == "-") {
    hex = trim(std::string(std::istreambuf_iterator<char>(in), {}));
  } else {
    hex = arg;
  }
  if (hex.size() != 2 * kHeaderBytes)
    throw UsageError("hash input must be 160 hex characters, got " +
                     std::to_string(hex.size()) + " in '" + hex + "'");
  Bytes input;
  try {
    input = from_hex(hex);
  } catch (const FormatError& e) {
    throw UsageError(std::string("malformed hex '") + hex + "': " + e.what());
  }
  const Digest256 d = scrypt_1024_1_1_256(input);
  if (cfg.output_format == Format::Json)
    out << json{{"digest", d.hex()}}.dump(2) << '\n';
  else
    out << d.hex() << '\n';
}

inline void cmd_mine(const RunConfig& cfg, const std::string& header_file,
                     const std::string& target_hex, const std::string& range,
                     unsigned workers, std::ostream& out) {
  const BlockHeader tmpl = parse_header_text(read_text_file(header_file), header_file);
  Target256 target;
  try {
    target = Target256::from_hex(trim(target_hex));
  } catch (const FormatError& e) {
    throw UsageError(std::string("malformed target '") + target_hex + "': " + e.what());
  }
  const auto [a, b] = parse_nonce_range(range);
  if (workers == 0) throw UsageError("--workers must be >= 1");

  const MiningResult r = mine_range(tmpl, a, b, target, workers);
  const json j = r;
  switch (cfg.output_format) {
    case Format::Json: out << j.dump(2) << '\n'; break;
    case Format::Csv: print_kv_csv(out, rows_of(j)); break;
    case Format::Table: print_table(out, rows_of(j)); break;
  }
}

inline void cmd_profile(const RunConfig& cfg, std::uint64_t hashes, std::ostream& out) {
  if (hashes == 0) throw UsageError("--hashes must be >= 1");
  const std::uint64_t seed = cfg.seed.value_or(0);
  const PhaseBreakdown phases = profile_phases(hashes, seed);
  const MemOpCounts counts = count_mem_ops(hashes, seed);
  switch (cfg.output_format) {
    case Format::Json:
      out << json{{"phase_breakdown", phases}, {"mem_op_counts", counts}}.dump(2) << '\n';
      break;
    case Format::Csv: out << phase_breakdown_csv(phases); break;
    case Format::Table: {
      auto rows = rows_of(json(phases));
      for (auto& r : rows_of(json(counts))) rows.push_back(std::move(r));
      print_table(out, rows);
      break;
    }
  }
}

inline json perf_report(const AsicCycleModel& model, const CacheSpec& cache,
                        std::optional<double> fpga_path_ns,
                        std::optional<std::uint64_t> fpga_reported) {
  AsicCycleModel at_access = model;
  at_access.clock_period_ns = cache.access_time_ns;
  AsicCycleModel at_cycle = model;
  at_cycle.clock_period_ns = cache.cycle_time_ns;
  const auto rate = theoretical_hashrate(model);

  json j{{"cycles_per_salsa", salsa_cycles(model)},
         {"cycles_per_hash", hash_cycles(model)},
         {"clock_period_ns", model.clock_period_ns},
         {"hashrate_hs", rate},
         {"hashrate_display", display_rate(static_cast<double>(rate))},
         {"sram_clock_bound",
          {{"access_time_ns", cache.access_time_ns},
           {"hashrate_at_access_time_hs", theoretical_hashrate(at_access)},
           {"cycle_time_ns", cache.cycle_time_ns},
           {"hashrate_at_cycle_time_hs", theoretical_hashrate(at_cycle)}}},
         {"model", model}};
  if (fpga_path_ns) {
    json f{{"critical_path_ns", *fpga_path_ns},
           {"hashrate_hs", critical_path_hashrate(*fpga_path_ns)}};
    // The published figure is 1e9/95; kept alongside for comparison.
    if (fpga_reported) f["reported_hashrate_hs"] = *fpga_reported;
    j["fpga"] = f;
  }
  return j;
}

inline void cmd_model_perf(const RunConfig& cfg, std::optional<double> clock_ns,
                           const std::string& cacti_file, std::ostream& out) {
  AsicCycleModel model;
  std::optional<double> fpga_path;
  std::optional<std::uint64_t> fpga_reported;
  if (cfg.preset_path) {
    const json preset = read_json_file(resolve_data_file(*cfg.preset_path));
    try {
      model = preset.contains("cycle_model") ? preset.at("cycle_model").get<AsicCycleModel>()
                                             : preset.get<AsicCycleModel>();
    } catch (const json::exception& e) {
      throw FormatError("cycle_model", std::string("bad cycle model: ") + e.what());
    }
    if (preset.contains("fpga")) {
      fpga_path = detail::require_positive(preset.at("fpga"), "critical_path_ns");
      if (preset.at("fpga").contains("reported_hashrate"))
        fpga_reported = detail::require_count(preset.at("fpga"), "reported_hashrate");
    }
  }
  if (clock_ns) {
    if (!(*clock_ns > 0)) throw UsageError("--clock-ns must be positive");
    model.clock_period_ns = *clock_ns;
  }
  const CacheSpec cache = load_cacti_summary(resolve_data_file(cacti_file));
  const json j = perf_report(model, cache, fpga_path, fpga_reported);

  switch (cfg.output_format) {
    case Format::Json: out << j.dump(2) << '\n'; break;
    case Format::Csv: {
      out << "key,value\n";
      for (const auto& key : {"cycles_per_salsa", "cycles_per_hash", "clock_period_ns",
                              "hashrate_hs"})
        out << key << ',' << j.at(key).dump() << '\n';
      break;
    }
    case Format::Table: {
      std::vector<std::pair<std::string, std::string>> rows{
          {"cycles per salsa", j["cycles_per_salsa"].dump()},
          {"cycles per hash", j["cycles_per_hash"].dump()},
          {"clock period (ns)", j["clock_period_ns"].dump()},
          {"hash rate", j["hashrate_hs"].dump() + " H/s (" +
                            j["hashrate_display"].get<std::string>() + ")"},
          {"at SRAM access time", j["sram_clock_bound"]["hashrate_at_access_time_hs"].dump() + " H/s"},
          {"at SRAM cycle time", j["sram_clock_bound"]["hashrate_at_cycle_time_hs"].dump() + " H/s"}};
      if (j.contains("fpga"))
        rows.emplace_back("FPGA critical path", j["fpga"]["hashrate_hs"].dump() + " H/s");
      print_table(out, rows);
      break;
    }
  }
}

inline json ranking_json(const MemoryRanking& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
  json ranked = json::array();
  for (const auto& t : r.ranked)
    ranked.push_back({{"name", t.name},
                      {"effective_latency_ns", t.effective_latency_ns},
                      {"read_ns", opt(t.read_ns)},
                      {"write_ns", opt(t.write_ns)},
                      {"max_clock_ghz", opt(t.max_clock_ghz)},
                      {"slowdown_vs_fastest", t.slowdown_vs_fastest}});
  json unranked = json::array();
  for (const auto& t : r.unranked) unranked.push_back({{"name", t.name}, {"notes", t.notes}});
  return {{"ranked", ranked}, {"unranked", unranked}};
}

inline void cmd_model_mem(const RunConfig& cfg, const std::string& catalog_file,
                          std::ostream& out) {
  const auto catalog = load_memory_catalog(resolve_data_file(catalog_file));
  const MemoryRanking r = rank_memory_techs(catalog);
  switch (cfg.output_format) {
    case Format::Json: out << ranking_json(r).dump(2) << '\n'; break;
    case Format::Csv:
      out << "name,effective_latency_ns,max_clock_ghz,slowdown_vs_fastest\n";
      for (const auto& t : r.ranked)
        out << t.name << ',' << t.effective_latency_ns << ','
            << (t.max_clock_ghz ? fixed(*t.max_clock_ghz, 6) : "") << ','
            << fixed(t.slowdown_vs_fastest, 4) << '\n';
      break;
    case Format::Table: {
      out << std::left << std::setw(10) << "rank" << std::setw(10) << "name"
          << std::setw(14) << "latency_ns" << std::setw(14) << "max_clock_ghz"
          << "vs_fastest\n";
      int i = 1;
      for (const auto& t : r.ranked)
        out << std::left << std::setw(10) << i++ << std::setw(10) << t.name << std::setw(14)
            << t.effective_latency_ns << std::setw(14)
            << (t.max_clock_ghz ? fixed(*t.max_clock_ghz, 4) : "-")
            << fixed(t.slowdown_vs_fastest, 2) << "x\n";
      for (const auto& t : r.unranked) out << "unranked  " << t.name << ": " << t.notes << '\n';
      break;
    }
  }
}

inline json econ_report(const EconPreset& p) {
  const double area = die_area_mm2(p.die);
  const DieCost cost = die_cost(area, p.scenario);
  const double gross = revenue_per_day(p.scenario);
  const double net = net_revenue_per_day(p.scenario);
  const double days = breakeven_days(cost.usd, net);

  json series = json::array();
  for (const auto& pt : breakeven_series(cost.usd, net, p.series_days))
    series.push_back({{"day", pt.day}, {"cumulative_net_usd", pt.cumulative_net_usd}});

  return {{"preset", p.name},
          {"die_area_mm2", area},
          {"cache_area_um2", p.die.cache_area_um2()},
          {"logic_area_um2", p.die.logic_area_um2()},
          {"die_cost_eur", cost.eur},
          {"die_cost_usd", cost.usd},
          {"revenue_usd_per_day", gross},
          {"power_cost_usd_per_day", power_cost_per_day(p.scenario)},
          {"breakeven_days", days},
          {"cluster", cluster_power(p.cluster_target_hashrate, p.cluster_designs)},
          {"bruteforce_attack_days",
           bruteforce_attack_days(p.bruteforce.dict_words, p.bruteforce.combo_length,
                                  p.bruteforce.accesses_per_password, p.bruteforce.access_ns)},
          {"collision_expectation",
           static_cast<double>(collision_expectation(p.collision.events_per_year,
                                                     p.collision.hash_bits))},
          {"breakeven_series", series}};
}

inline void cmd_model_econ(const RunConfig& cfg, std::ostream& out) {
  const EconPreset preset =
      load_econ_preset(resolve_data_file(cfg.preset_path.value_or("paper-2014.json")));
  const json j = econ_report(preset);
  switch (cfg.output_format) {
    case Format::Json: out << j.dump(2) << '\n'; break;
    case Format::Csv:
      out << "day,cumulative_net_usd\n";
      for (const auto& pt : j["breakeven_series"])
        out << pt["day"].get<std::uint64_t>() << ','
            << fixed(pt["cumulative_net_usd"].get<double>(), 2) << '\n';
      break;
    case Format::Table: {
      std::vector<std::pair<std::string, std::string>> rows{
          {"die area (mm^2)", fixed(j["die_area_mm2"], 6)},
          {"die cost (EUR)", fixed(j["die_cost_eur"], 2)},
          {"die cost (USD)", fixed(j["die_cost_usd"], 2)},
          {"revenue (USD/day)", fixed(j["revenue_usd_per_day"], 2)},
          {"break-even (days)", fixed(j["breakeven_days"], 2)},
          {"brute force (days)", fixed(j["bruteforce_attack_days"], 5)},
          {"collisions / year", json_scalar(j["collision_expectation"])}};
      for (const auto& row : j["cluster"]["designs"])
        rows.emplace_back("cluster " + row["name"].get<std::string>(),
                          row["units_needed"].dump() + " units, " +
                              fixed(row["total_watts"], 0) + " W");
      print_table(out, rows);
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"scryptforge: scrypt(1024,1,1) proof-of-work kernel, profiler and ASIC models",
               "scryptforge"};
  app.fallthrough();

  RunConfig cfg;
  std::string format = "json";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  auto* hash = app.add_subcommand(
      "hash", "scrypt(1024,1,1,32) digest of an 80-byte block header given as 160 hex "
              "characters ('-' reads stdin)");
  std::string hash_arg;
  hash->add_option("header", hash_arg, "160 hex characters, or - for stdin")->required();

  auto* mine = app.add_subcommand(
      "mine", "Nonce search over a block-header template; reports the lowest nonce whose "
              "little-endian digest is <= target");
  std::string header_file, target_hex, nonce_range;
  unsigned workers = 1;
  mine->add_option("--header", header_file, "File holding the header as 160 hex chars")
      ->required();
  mine->add_option("--target", target_hex, "Target as 64 hex chars (big-endian)")->required();
  mine->add_option("--nonce-range", nonce_range, "Inclusive range a..b")->required();
  mine->add_option("--workers", workers, "Parallel workers");

  auto* profile = app.add_subcommand(
      "profile", "Phase-time breakdown (PBKDF2, ROMix fill/mix, Salsa20/8) and salsa "
                 "memory-operation counts");
  std::uint64_t hashes = 1000;
  std::uint64_t seed = 0;
  profile->add_option("--hashes", hashes, "Number of hashes to time")->required();
  profile->add_option("--seed", seed, "Seed for the input generator");

  auto* model = app.add_subcommand("model", "Analytical ASIC, memory and economics models");
  model->fallthrough();

  auto* perf = model->add_subcommand(
      "perf", "Cycle-count model: cycles per salsa call and per hash, theoretical hash rate");
  std::optional<double> clock_ns;
  std::string perf_preset;
  std::string cacti_file = "cacti_128kb_sram.json";
  perf->add_option("--clock-ns", clock_ns, "Clock period in ns");
  perf->add_option("--preset", perf_preset, "JSON preset with a cycle_model section");
  perf->add_option("--cacti", cacti_file, "Cache characterization JSON");

  auto* mem = model->add_subcommand(
      "mem", "Memory technology ranking (SRAM, DRAM, STT-RAM, PC-RAM, MRAM) by latency");
  std::string catalog_file = "memory_catalog.json";
  mem->add_option("--catalog", catalog_file, "Memory catalog JSON");

  auto* econ = model->add_subcommand(
      "econ", "Die area, fabrication cost, revenue, break-even series and cluster power");
  std::string econ_preset;
  econ->add_option("--preset", econ_preset, "Economics preset JSON");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (app.get_subcommands().empty() || (*model && model->get_subcommands().empty())) {
    err << "usage error: a subcommand is required\n" << app.help();
    return 2;
  }

  cfg.output_format = format == "csv" ? Format::Csv
                      : format == "table" ? Format::Table
                                          : Format::Json;

  try {
    if (*hash) {
      cfg.subcommand = "hash";
      cmd_hash(cfg, hash_arg, in, out);
    } else if (*mine) {
      cfg.subcommand = "mine";
      cmd_mine(cfg, header_file, target_hex, nonce_range, workers, out);
    } else if (*profile) {
      cfg.subcommand = "profile";
      cfg.seed = seed;
      cmd_profile(cfg, hashes, out);
    } else if (*perf) {
      cfg.subcommand = "model perf";
      if (!perf_preset.empty()) cfg.preset_path = perf_preset;
      cmd_model_perf(cfg, clock_ns, cacti_file, out);
    } else if (*mem) {
      cfg.subcommand = "model mem";
      cmd_model_mem(cfg, catalog_file, out);
    } else if (*econ) {
      cfg.subcommand = "model econ";
      if (!econ_preset.empty()) cfg.preset_path = econ_preset;
      cmd_model_econ(cfg, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

inline int run(const std::vector<std::string>& args) {
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace scryptforge::cli
