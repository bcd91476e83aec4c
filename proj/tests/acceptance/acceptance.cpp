// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/reference.hpp"
#include "scryptforge/econ.hpp"
#include "scryptforge/instrumentation.hpp"
#include "scryptforge/miner.hpp"
#include "scryptforge/perf_model.hpp"
#include "scryptforge/scrypt.hpp"
#include "support.hpp"

using namespace scryptforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

bool within_rel(double v, double expect, double rel) {
  return std::abs(v - expect) <= std::abs(expect) * rel;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Outcome kernel_vs_oracle() {
  Outcome o;
  const auto t0 = Clock::now();

  SalsaBlock in{}, out{};
  const Bytes vin = from_hex(
      "7e879a214f3ec9867ca940e641718f26baee555b8c61c1b50df846116dcd3b1d"
      "ee24f319df9b3d8514121e4b5ac5aa3276021d2909c74829edebc68db8b8c25e");
  const Bytes vout = from_hex(
      "a41f859c6608cc993b81cacb020cef05044b2181a2fd337dfd7b1c6396682f29"
      "b4393168e3c9e6bcfe6bc5b7a06d96bae424cc102c91745c24ad673dc7618f81");
  for (std::size_t i = 0; i < 16; ++i) {
    in[i] = le32_decode(ByteView(vin).subspan(4 * i, 4));
    out[i] = le32_decode(ByteView(vout).subspan(4 * i, 4));
  }
  o.check(salsa20_8_core(in) == out, "salsa20/8 core vector");

  std::mt19937_64 rng(20140501);
  ScryptHasher hasher;
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Bytes input = testsupport::random_bytes(rng, kHeaderBytes);
    const Digest256 d = hasher(input);
    if (Bytes(d.bytes.begin(), d.bytes.end()) != oracle::openssl_scrypt(input, input, 1024, 1, 1, 32))
      ++mismatches;
  }
  const double secs = seconds_since(t0);
  o.check(mismatches == 0, std::to_string(mismatches) + " digest mismatches");
  o.check(secs < 10.0, "took over 10 s");
  o.detail << "1000/1000 digests match OpenSSL scrypt, salsa vector ok, " << secs << " s";
  return o;
}

Outcome cycle_model() {
  Outcome o;
  const AsicCycleModel m;
  o.check(salsa_cycles(m) == 34, "cycles per salsa");
  o.check(hash_cycles(m) == 139264, "cycles per hash");
  o.check(theoretical_hashrate(m) == 7180, "hash rate at 1 ns");
  o.detail << salsa_cycles(m) << " cycles/salsa, " << hash_cycles(m) << " cycles/hash, "
           << theoretical_hashrate(m) << " H/s at 1 ns";
  return o;
}

Outcome mem_ops() {
  Outcome o;
  const MemOpCounts c = count_mem_ops(1);
  o.check(c.salsa_calls == 4096, "salsa calls");
  o.check(c.salsa_reads == 196608, "salsa reads");
  o.check(c.salsa_writes == 131072, "salsa writes");
  o.check(c.scratchpad_bytes_written == 131072, "scratchpad bytes written");
  o.check(c.scratchpad_bytes_read == 131072, "scratchpad bytes read");
  o.detail << c.salsa_calls << " calls, " << c.salsa_reads << " reads, " << c.salsa_writes
           << " writes, " << c.scratchpad_bytes_written << " B scratchpad";
  return o;
}

Outcome memory_ranking() {
  Outcome o;
  const auto r =
      rank_memory_techs(load_memory_catalog(testsupport::data_path("memory_catalog.json")));
  const bool sram_first = !r.ranked.empty() && r.ranked.front().name == "SRAM";
  o.check(sram_first, "SRAM not ranked first");
  double ghz = 0;
  if (sram_first && r.ranked.front().max_clock_ghz) ghz = *r.ranked.front().max_clock_ghz;
  o.check(within_rel(ghz, 1.333, 0.005), "SRAM max clock");
  o.detail << "fastest " << (r.ranked.empty() ? "-" : r.ranked.front().name) << ", max clock "
           << ghz << " GHz";
  return o;
}

Outcome economics() {
  Outcome o;
  const EconPreset p = load_econ_preset(testsupport::data_path("paper-2014.json"));
  const double area = die_area_mm2(p.die);
  const DieCost cost = die_cost(area, p.scenario);
  const double days = breakeven_days(cost.usd, net_revenue_per_day(p.scenario));
  const ClusterComparison cl = cluster_power(p.cluster_target_hashrate, p.cluster_designs);
  o.check(within_rel(area, 0.227481, 0.005), "die area");
  o.check(within_rel(cost.eur, 796.18, 0.005), "EUR cost");
  o.check(within_rel(cost.usd, 1087.27, 0.005), "USD cost");
  o.check(std::abs(days - 58.77) <= 2.0, "break-even days");
  double cpu_w = -1, gpu_w = -1;
  for (const auto& row : cl.designs) {
    if (row.name == "cpu") cpu_w = row.total_watts;
    if (row.name == "gpu") gpu_w = row.total_watts;
  }
  o.check(cpu_w == 84000.0, "CPU cluster watts");
  o.check(gpu_w == 3000.0, "GPU cluster watts");
  o.detail << area << " mm^2, EUR " << cost.eur << ", USD " << cost.usd << ", break-even "
           << days << " d, CPU " << cpu_w << " W, GPU " << gpu_w << " W";
  return o;
}

Outcome attack_arithmetic() {
  Outcome o;
  const double days = bruteforce_attack_days(75000, 2, 1000, 60.0);
  const long double col = collision_expectation(52500, 128);
  char sig[32];
  std::snprintf(sig, sizeof sig, "%.5Le", col);
  o.check(days == 3.90625, "brute-force days");
  o.check(std::string(sig) == "1.54284e-34", "collision expectation");
  o.detail << "brute force " << days << " d, collisions " << sig << " per year";
  return o;
}

Outcome profiling() {
  Outcome o;
  const auto t0 = Clock::now();
  const PhaseBreakdown p = profile_phases(1000);
  const double secs = seconds_since(t0);
  o.check(p.salsa_kernel >= 0.45, "salsa fraction below 0.45");
  o.check(p.hash_rate >= 1e3 && p.hash_rate <= 1e6, "hash rate outside 1 KH/s..1 MH/s");
  o.check(secs < 60.0, "took over 60 s");
  o.detail << "salsa " << p.salsa_kernel * 100 << "% of time over " << p.total_hashes
           << " hashes, " << p.hash_rate << " H/s, " << secs << " s";
  return o;
}

Outcome parallel_mining() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  int agreed = 0, total = 0;

  for (int i = 0; i < 50; ++i) {
    const BlockHeader h = deserialize_header(testsupport::random_bytes(rng, kHeaderBytes));
    const Word32 start = static_cast<Word32>(rng() % 4000000000u);
    const Word32 end = start + static_cast<Word32>(rng() % 64);
    const MiningResult one = mine_range(h, start, end, Target256::max(), 1);
    const MiningResult four = mine_range(h, start, end, Target256::max(), 4);
    ++total;
    if (one.found_nonce && four.found_nonce && *one.found_nonce == start &&
        *four.found_nonce == start)
      ++agreed;
  }

  for (const auto& fx : testsupport::kernel_fixtures()["mining"]) {
    const BlockHeader h = header_from_hex(fx["header"].get<std::string>());
    const Target256 target = Target256::from_hex(fx["target"].get<std::string>());
    const Word32 start = fx["nonce_start"];
    const Word32 solve = fx["solving_nonce"];
    const MiningResult one = mine_range(h, start, solve + 20, target, 1);
    const MiningResult four = mine_range(h, start, solve + 20, target, 4);
    ++total;
    if (one.found_nonce == four.found_nonce && one.found_nonce == solve) ++agreed;
  }

  const double secs = seconds_since(t0);
  o.check(agreed == total, std::to_string(total - agreed) + " disagreements");
  o.check(secs < 30.0, "took over 30 s");
  o.detail << agreed << "/" << total << " searches agree between 1 and 4 workers, " << secs
           << " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"kernel matches independent scrypt on 1000 random headers", kernel_vs_oracle},
      {"ASIC cycle model", cycle_model},
      {"per-hash memory operation counts", mem_ops},
      {"memory technology ranking", memory_ranking},
      {"die cost, break-even and cluster power", economics},
      {"brute-force and collision arithmetic", attack_arithmetic},
      {"phase profile", profiling},
      {"parallel nonce search determinism", parallel_mining},
  };

  int failed = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s %d  %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name,
                o.detail.str().c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
