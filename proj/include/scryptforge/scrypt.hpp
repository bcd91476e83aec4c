#pragma once

// Fixed-parameter scrypt (N = 1024, r = 1, p = 1, dkLen = 32) as used for
// Litecoin-style proof of work:
//
//   B <- PBKDF2(input, input, 1, 128)
//   X <- le32 words of B
//   ROMix: fill 1024 scratchpad rows, then 1024 data-dependent revisits
//   output <- PBKDF2(input, le32 bytes of X, 1, 32)
//
// Every entry point is templated on a probe. The default NullProbe compiles
// to nothing; instrumentation.hpp supplies counting and timing probes.

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scryptforge/error.hpp"
#include "scryptforge/hashcore.hpp"

namespace scryptforge {

inline constexpr std::size_t kScryptN = 1024;
inline constexpr std::size_t kRowWords = 32;
inline constexpr std::size_t kRowBytes = kRowWords * 4;
inline constexpr std::size_t kScratchpadBytes = kScryptN * kRowBytes;
inline constexpr std::size_t kHeaderBytes = 80;
inline constexpr std::uint64_t kSalsaCallsPerHash = 2 * 2 * kScryptN;

using SalsaBlock = std::array<Word32, 16>;

/// Circular left rotation. Amounts outside 1..31 are rejected.
constexpr Word32 rotl32(Word32 a, int b) {
  if (b < 1 || b > 31)
    throw ParameterError("rotl32: rotation amount " + std::to_string(b) +
                         " outside 1..31");
  return (a << b) | (a >> (32 - b));
}

enum class Phase { Pbkdf2Pre, RomixFill, RomixMix, Pbkdf2Post };

// ---------------------------------------------------------------------------
// Probe policy

// Direct access to a 16-word block.
struct PlainWords {
  Word32* p;
  Word32 get(std::size_t i) const noexcept { return p[i]; }
  void set(std::size_t i, Word32 v) const noexcept { p[i] = v; }
};

struct PlainConstWords {
  const Word32* p;
  Word32 get(std::size_t i) const noexcept { return p[i]; }
};

/// No-op hooks. Custom probes derive from this and shadow what they need.
struct NullProbe {
  void phase_begin(Phase) noexcept {}
  void phase_end(Phase) noexcept {}
  void salsa_pair_begin() noexcept {}
  void salsa_pair_end() noexcept {}
  void salsa_call() noexcept {}
  void row_written(std::size_t) noexcept {}
  void row_read(std::size_t) noexcept {}
  PlainWords words(Word32* p) noexcept { return {p}; }
  PlainConstWords words(const Word32* p) noexcept { return {p}; }
};

// ---------------------------------------------------------------------------
// Salsa20/8

namespace detail {

template <std::size_t A, std::size_t B, std::size_t C, std::size_t D>
inline void quarter_round(SalsaBlock& x) noexcept {
  x[B] ^= std::rotl(x[A] + x[D], 7);
  x[C] ^= std::rotl(x[B] + x[A], 9);
  x[D] ^= std::rotl(x[C] + x[B], 13);
  x[A] ^= std::rotl(x[D] + x[C], 18);
}

// B <- (B ^ Bx) + rounds(B ^ Bx). All array traffic goes through the views so
// a counting view sees exactly the loads and stores the kernel performs.
template <class BlockView, class SourceView>
inline void xor_salsa8_views(BlockView block, SourceView source) noexcept {
  SalsaBlock x;
  for (std::size_t i = 0; i < 16; ++i) {
    x[i] = block.get(i) ^ source.get(i);
    block.set(i, x[i]);
  }
  for (int double_round = 0; double_round < 4; ++double_round) {
    // columns
    quarter_round<0, 4, 8, 12>(x);
    quarter_round<5, 9, 13, 1>(x);
    quarter_round<10, 14, 2, 6>(x);
    quarter_round<15, 3, 7, 11>(x);
    // rows
    quarter_round<0, 1, 2, 3>(x);
    quarter_round<5, 6, 7, 4>(x);
    quarter_round<10, 11, 8, 9>(x);
    quarter_round<15, 12, 13, 14>(x);
  }
  for (std::size_t i = 0; i < 16; ++i) block.set(i, block.get(i) + x[i]);
}

}  // namespace detail

template <class Probe>
inline void xor_salsa8(std::span<Word32, 16> block,
                       std::span<const Word32, 16> source, Probe& probe) {
  probe.salsa_call();
  detail::xor_salsa8_views(probe.words(block.data()),
                           probe.words(source.data()));
}

inline void xor_salsa8(SalsaBlock& block, const SalsaBlock& source) noexcept {
  NullProbe probe;
  xor_salsa8(std::span<Word32, 16>(block), std::span<const Word32, 16>(source),
             probe);
}

/// Salsa20/8 core (rounds plus feed-forward) of `in`.
inline SalsaBlock salsa20_8_core(const SalsaBlock& in) noexcept {
  SalsaBlock out = in;
  xor_salsa8(out, SalsaBlock{});
  return out;
}

// ---------------------------------------------------------------------------
// Scratchpad and state

/// The 1024 x 128-byte table V. Reusable across hashes without clearing: the
/// fill phase overwrites every row before the mix phase reads any.
class ScryptScratchpad {
 public:
  static constexpr std::size_t kRows = kScryptN;
  static constexpr std::size_t kBytes = kScratchpadBytes;

  ScryptScratchpad() : words_(kRows * kRowWords, 0) {}

  std::span<Word32, kRowWords> row(std::size_t i) noexcept {
    return std::span<Word32, kRowWords>(words_.data() + i * kRowWords,
                                        kRowWords);
  }
  std::span<const Word32, kRowWords> row(std::size_t i) const noexcept {
    return std::span<const Word32, kRowWords>(words_.data() + i * kRowWords,
                                              kRowWords);
  }

  std::size_t rows() const noexcept { return kRows; }
  std::size_t size_bytes() const noexcept { return words_.size() * 4; }

 private:
  std::vector<Word32> words_;
};

/// The 128-byte buffer B and its 32-word view X.
struct ScryptState {
  std::array<std::uint8_t, kRowBytes> b{};
  std::array<Word32, kRowWords> x{};

  void ingest() noexcept {
    for (std::size_t k = 0; k < kRowWords; ++k)
      x[k] = le32_decode(std::span<const std::uint8_t, 4>(b.data() + 4 * k, 4));
  }

  void emit() noexcept {
    for (std::size_t k = 0; k < kRowWords; ++k)
      le32_encode(std::span<std::uint8_t, 4>(b.data() + 4 * k, 4), x[k]);
  }
};

// ---------------------------------------------------------------------------
// ROMix

namespace detail {

template <class Probe>
inline void salsa_pair(std::span<Word32, kRowWords> x, Probe& probe) {
  probe.salsa_pair_begin();
  xor_salsa8(x.first<16>(), std::span<const Word32, 16>(x.last<16>()), probe);
  xor_salsa8(x.last<16>(), std::span<const Word32, 16>(x.first<16>()), probe);
  probe.salsa_pair_end();
}

}  // namespace detail

template <class Probe>
inline void romix(std::span<Word32, kRowWords> x, ScryptScratchpad& v,
                  Probe& probe) {
  probe.phase_begin(Phase::RomixFill);
  for (std::size_t i = 0; i < kScryptN; ++i) {
    std::ranges::copy(x, v.row(i).begin());
    probe.row_written(i);
    detail::salsa_pair(x, probe);
  }
  probe.phase_end(Phase::RomixFill);

  probe.phase_begin(Phase::RomixMix);
  for (std::size_t i = 0; i < kScryptN; ++i) {
    // j comes from X[16] as left by the previous iteration's salsa pair.
    const std::size_t j = x[16] & (kScryptN - 1);
    const auto row = std::as_const(v).row(j);
    probe.row_read(j);
    for (std::size_t k = 0; k < kRowWords; ++k) x[k] ^= row[k];
    detail::salsa_pair(x, probe);
  }
  probe.phase_end(Phase::RomixMix);
}

inline void romix(std::span<Word32, kRowWords> x, ScryptScratchpad& v) {
  NullProbe probe;
  romix(x, v, probe);
}

// ---------------------------------------------------------------------------
// scrypt(1024, 1, 1, 32)

template <class Probe>
inline Digest256 scrypt_1024_1_1_256(ByteView input, ScryptScratchpad& v,
                                     Probe& probe) {
  if (input.size() != kHeaderBytes)
    throw ParameterError("scrypt_1024_1_1_256: input must be exactly 80 bytes, got " +
                         std::to_string(input.size()));

  ScryptState state;
  probe.phase_begin(Phase::Pbkdf2Pre);
  pbkdf2_sha256(input, input, 1, state.b);
  state.ingest();
  probe.phase_end(Phase::Pbkdf2Pre);

  romix(state.x, v, probe);

  Digest256 out;
  probe.phase_begin(Phase::Pbkdf2Post);
  state.emit();
  pbkdf2_sha256(input, state.b, 1, out.bytes);
  probe.phase_end(Phase::Pbkdf2Post);
  return out;
}

inline Digest256 scrypt_1024_1_1_256(ByteView input, ScryptScratchpad& v) {
  NullProbe probe;
  return scrypt_1024_1_1_256(input, v, probe);
}

inline Digest256 scrypt_1024_1_1_256(ByteView input) {
  ScryptScratchpad v;
  return scrypt_1024_1_1_256(input, v);
}

/// A hashing worker: owns one scratchpad and reuses it for every call.
class ScryptHasher {
 public:
  Digest256 operator()(ByteView input) { return scrypt_1024_1_1_256(input, pad_); }

  template <class Probe>
  Digest256 operator()(ByteView input, Probe& probe) {
    return scrypt_1024_1_1_256(input, pad_, probe);
  }

  ScryptScratchpad& scratchpad() noexcept { return pad_; }

 private:
  ScryptScratchpad pad_;
};

}  // namespace scryptforge
