#pragma once

// Counted and timed runs of the scrypt kernel.
//
// Memory operations follow the convention of counting array traffic on the
// two salsa operands only (locals excluded): the ingest loop does two loads
// and one store per word, the feed-forward does one load and one store per
// word, giving 48 loads and 32 stores per xor_salsa8 call.

#include <array>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "scryptforge/error.hpp"
#include "scryptforge/scrypt.hpp"

namespace scryptforge {

struct MemOpCounts {
  std::uint64_t salsa_reads = 0;
  std::uint64_t salsa_writes = 0;
  std::uint64_t salsa_calls = 0;
  std::uint64_t scratchpad_bytes_written = 0;
  std::uint64_t scratchpad_bytes_read = 0;

  MemOpCounts& operator+=(const MemOpCounts& o) noexcept {
    salsa_reads += o.salsa_reads;
    salsa_writes += o.salsa_writes;
    salsa_calls += o.salsa_calls;
    scratchpad_bytes_written += o.scratchpad_bytes_written;
    scratchpad_bytes_read += o.scratchpad_bytes_read;
    return *this;
  }

  friend bool operator==(const MemOpCounts&, const MemOpCounts&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MemOpCounts, salsa_reads, salsa_writes,
                                   salsa_calls, scratchpad_bytes_written,
                                   scratchpad_bytes_read)

// Word views that tally every load and store.
struct CountedWords {
  Word32* p;
  MemOpCounts* counts;
  Word32 get(std::size_t i) const noexcept {
    ++counts->salsa_reads;
    return p[i];
  }
  void set(std::size_t i, Word32 v) const noexcept {
    ++counts->salsa_writes;
    p[i] = v;
  }
};

struct CountedConstWords {
  const Word32* p;
  MemOpCounts* counts;
  Word32 get(std::size_t i) const noexcept {
    ++counts->salsa_reads;
    return p[i];
  }
};

class CountingProbe : public NullProbe {
 public:
  void salsa_call() noexcept { ++counts_.salsa_calls; }
  void row_written(std::size_t) noexcept {
    counts_.scratchpad_bytes_written += kRowBytes;
  }
  void row_read(std::size_t) noexcept {
    counts_.scratchpad_bytes_read += kRowBytes;
  }
  CountedWords words(Word32* p) noexcept { return {p, &counts_}; }
  CountedConstWords words(const Word32* p) noexcept { return {p, &counts_}; }

  const MemOpCounts& counts() const noexcept { return counts_; }

 private:
  MemOpCounts counts_;
};

/// Deterministic stream of 80-byte inputs.
class HeaderSource {
 public:
  explicit HeaderSource(std::uint64_t seed) : rng_(seed) {}

  std::array<std::uint8_t, kHeaderBytes> next() {
    std::array<std::uint8_t, kHeaderBytes> out;
    for (std::size_t i = 0; i < kHeaderBytes; i += 8) {
      const std::uint64_t r = rng_();
      for (std::size_t k = 0; k < 8; ++k)
        out[i + k] = static_cast<std::uint8_t>(r >> (8 * k));
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

inline MemOpCounts count_mem_ops(std::uint64_t n_hashes, std::uint64_t seed = 0) {
  if (n_hashes == 0) throw ParameterError("count_mem_ops: n_hashes must be >= 1");
  HeaderSource source(seed);
  ScryptHasher hasher;
  CountingProbe probe;
  for (std::uint64_t i = 0; i < n_hashes; ++i) {
    const auto input = source.next();
    hasher(input, probe);
  }
  return probe.counts();
}

// ---------------------------------------------------------------------------
// Phase timing

struct PhaseBreakdown {
  double pbkdf2_pre = 0;
  double romix_fill = 0;
  double romix_mix = 0;
  double salsa_kernel = 0;
  double pbkdf2_post = 0;
  std::uint64_t total_hashes = 0;
  double total_seconds = 0;
  double hash_rate = 0;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhaseBreakdown, pbkdf2_pre, romix_fill,
                                   romix_mix, salsa_kernel, pbkdf2_post,
                                   total_hashes, total_seconds, hash_rate)

/// Accumulates wall time per phase. Salsa time is taken around each salsa
/// pair and later subtracted from the enclosing ROMix phase so the five
/// categories are disjoint.
class TimingProbe : public NullProbe {
 public:
  using Clock = std::chrono::steady_clock;

  void phase_begin(Phase p) noexcept {
    current_ = p;
    phase_start_ = Clock::now();
  }
  void phase_end(Phase p) noexcept {
    phase_total_[static_cast<std::size_t>(p)] += Clock::now() - phase_start_;
  }
  void salsa_pair_begin() noexcept { pair_start_ = Clock::now(); }
  void salsa_pair_end() noexcept {
    salsa_in_phase_[static_cast<std::size_t>(current_)] +=
        Clock::now() - pair_start_;
  }

  double seconds(Phase p) const noexcept {
    return std::chrono::duration<double>(
               phase_total_[static_cast<std::size_t>(p)])
        .count();
  }
  double salsa_seconds(Phase p) const noexcept {
    return std::chrono::duration<double>(
               salsa_in_phase_[static_cast<std::size_t>(p)])
        .count();
  }

 private:
  Phase current_ = Phase::Pbkdf2Pre;
  Clock::time_point phase_start_{};
  Clock::time_point pair_start_{};
  std::array<Clock::duration, 4> phase_total_{};
  std::array<Clock::duration, 4> salsa_in_phase_{};
};

inline PhaseBreakdown profile_phases(std::uint64_t n_hashes, std::uint64_t seed = 0) {
  if (n_hashes == 0) throw ParameterError("profile_phases: n_hashes must be >= 1");
  if (!TimingProbe::Clock::is_steady)
    throw EnvironmentError("profile_phases: no monotonic clock available");

  HeaderSource source(seed);
  ScryptHasher hasher;
  TimingProbe probe;

  const auto start = TimingProbe::Clock::now();
  for (std::uint64_t i = 0; i < n_hashes; ++i) {
    const auto input = source.next();
    hasher(input, probe);
  }
  const double wall =
      std::chrono::duration<double>(TimingProbe::Clock::now() - start).count();
  if (!(wall > 0))
    throw EnvironmentError("profile_phases: clock did not advance");

  const double salsa_fill = probe.salsa_seconds(Phase::RomixFill);
  const double salsa_mix = probe.salsa_seconds(Phase::RomixMix);
  const auto exclusive = [](double total, double nested) {
    return total > nested ? total - nested : 0.0;
  };

  const double pre = probe.seconds(Phase::Pbkdf2Pre);
  const double fill = exclusive(probe.seconds(Phase::RomixFill), salsa_fill);
  const double mix = exclusive(probe.seconds(Phase::RomixMix), salsa_mix);
  const double salsa = salsa_fill + salsa_mix;
  const double post = probe.seconds(Phase::Pbkdf2Post);
  const double sum = pre + fill + mix + salsa + post;
  if (!(sum > 0))
    throw EnvironmentError("profile_phases: no phase time was recorded");

  PhaseBreakdown out;
  out.pbkdf2_pre = pre / sum;
  out.romix_fill = fill / sum;
  out.romix_mix = mix / sum;
  out.salsa_kernel = salsa / sum;
  out.pbkdf2_post = post / sum;
  out.total_hashes = n_hashes;
  out.total_seconds = wall;
  out.hash_rate = static_cast<double>(n_hashes) / wall;
  return out;
}

/// Two-column CSV (phase,fraction) for plotting.
inline std::string phase_breakdown_csv(const PhaseBreakdown& b) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(9);
  os << "phase,fraction\n"
     << "pbkdf2_pre," << b.pbkdf2_pre << '\n'
     << "romix_fill," << b.romix_fill << '\n'
     << "romix_mix," << b.romix_mix << '\n'
     << "salsa_kernel," << b.salsa_kernel << '\n'
     << "pbkdf2_post," << b.pbkdf2_post << '\n';
  return os.str();
}

inline std::string mem_op_counts_csv(const MemOpCounts& c) {
  std::ostringstream os;
  os << "counter,value\n"
     << "salsa_reads," << c.salsa_reads << '\n'
     << "salsa_writes," << c.salsa_writes << '\n'
     << "salsa_calls," << c.salsa_calls << '\n'
     << "scratchpad_bytes_written," << c.scratchpad_bytes_written << '\n'
     << "scratchpad_bytes_read," << c.scratchpad_bytes_read << '\n';
  return os.str();
}

}  // namespace scryptforge
