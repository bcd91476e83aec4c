#pragma once

// Block-header serialization, target comparison and nonce search.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "scryptforge/error.hpp"
#include "scryptforge/hashcore.hpp"
#include "scryptforge/scrypt.hpp"

namespace scryptforge {

using Hash32 = std::array<std::uint8_t, 32>;

/// The 80-byte mining input. Hash fields hold raw serialized bytes (the
/// reverse of the usual display order).
struct BlockHeader {
  Word32 version = 0;
  Hash32 prev_block_hash{};
  Hash32 merkle_root{};
  Word32 time = 0;
  Word32 bits = 0;  // compact difficulty, carried opaque
  Word32 nonce = 0;

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

inline constexpr std::size_t kNonceOffset = 76;

inline std::array<std::uint8_t, kHeaderBytes> serialize_header(const BlockHeader& h) {
  std::array<std::uint8_t, kHeaderBytes> out{};
  auto put32 = [&](std::size_t off, Word32 v) {
    le32_encode(std::span<std::uint8_t, 4>(out.data() + off, 4), v);
  };
  put32(0, h.version);
  std::ranges::copy(h.prev_block_hash, out.begin() + 4);
  std::ranges::copy(h.merkle_root, out.begin() + 36);
  put32(68, h.time);
  put32(72, h.bits);
  put32(kNonceOffset, h.nonce);
  return out;
}

inline BlockHeader deserialize_header(ByteView bytes) {
  if (bytes.size() != kHeaderBytes)
    throw InputSizeError("deserialize_header", kHeaderBytes, bytes.size());
  auto get32 = [&](std::size_t off) {
    return le32_decode(std::span<const std::uint8_t, 4>(bytes.data() + off, 4));
  };
  BlockHeader h;
  h.version = get32(0);
  std::copy_n(bytes.begin() + 4, 32, h.prev_block_hash.begin());
  std::copy_n(bytes.begin() + 36, 32, h.merkle_root.begin());
  h.time = get32(68);
  h.bits = get32(72);
  h.nonce = get32(kNonceOffset);
  return h;
}

inline BlockHeader header_from_hex(std::string_view hex) {
  if (hex.size() != 2 * kHeaderBytes)
    throw FormatError(std::string(hex), "header hex must be 160 characters, got " +
                                            std::to_string(hex.size()));
  return deserialize_header(from_hex(hex));
}

// ---------------------------------------------------------------------------
// Target

/// 256-bit unsigned target. Stored least-significant byte first, which is
/// also how a digest is read as an integer. Hex text is the usual big-endian
/// numeral, 64 digits.
class Target256 {
 public:
  constexpr Target256() = default;

  static Target256 from_le_bytes(const std::array<std::uint8_t, 32>& le) {
    Target256 t;
    t.le_ = le;
    return t;
  }

  static Target256 from_hex(std::string_view hex) {
    if (hex.size() != 64)
      throw FormatError(std::string(hex), "target must be 64 hex characters, got " +
                                              std::to_string(hex.size()));
    const Bytes be = scryptforge::from_hex(hex);
    Target256 t;
    std::copy(be.rbegin(), be.rend(), t.le_.begin());
    return t;
  }

  static Target256 max() {
    Target256 t;
    t.le_.fill(0xff);
    return t;
  }

  std::string hex() const {
    std::array<std::uint8_t, 32> be;
    std::copy(le_.rbegin(), le_.rend(), be.begin());
    return to_hex(be);
  }

  const std::array<std::uint8_t, 32>& le_bytes() const noexcept { return le_; }

  friend bool operator==(const Target256&, const Target256&) = default;
  friend std::strong_ordering operator<=>(const Target256& a, const Target256& b) {
    for (std::size_t i = 32; i-- > 0;)
      if (auto c = a.le_[i] <=> b.le_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  std::array<std::uint8_t, 32> le_{};
};

/// True iff the digest, read little-endian as a 256-bit integer, is <= target.
inline bool meets_target(const Digest256& digest, const Target256& target) noexcept {
  const auto& t = target.le_bytes();
  for (std::size_t i = 32; i-- > 0;) {
    if (digest.bytes[i] < t[i]) return true;
    if (digest.bytes[i] > t[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Search

struct MiningResult {
  std::optional<Word32> found_nonce;
  std::uint64_t hashes_tried = 0;
  double elapsed_seconds = 0;
  double hash_rate = 0;
};

inline void to_json(nlohmann::json& j, const MiningResult& r) {
  j = nlohmann::json{
      {"found_nonce", r.found_nonce ? nlohmann::json(*r.found_nonce) : nlohmann::json()},
      {"hashes_tried", r.hashes_tried},
      {"elapsed_seconds", r.elapsed_seconds},
      {"hash_rate", r.hash_rate}};
}

/// Scans nonces nonce_start..nonce_end inclusive and reports the lowest one
/// whose digest meets `target`. Workers take interleaved lanes and stop as
/// soon as their next nonce is not below the best hit so far, so the answer
/// does not depend on the worker count.
inline MiningResult mine_range(const BlockHeader& tmpl, Word32 nonce_start,
                               Word32 nonce_end, const Target256& target,
                               unsigned workers = 1) {
  if (nonce_start > nonce_end)
    throw ParameterError("mine_range: nonce_start " + std::to_string(nonce_start) +
                         " > nonce_end " + std::to_string(nonce_end));
  if (workers == 0) throw ParameterError("mine_range: workers must be >= 1");

  const std::uint64_t first = nonce_start;
  const std::uint64_t last = nonce_end;
  const std::uint64_t span = last - first + 1;
  const std::uint64_t lanes = std::min<std::uint64_t>(workers, span);

  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<std::uint64_t> tried{0};

  auto lane = [&](std::uint64_t offset) {
    ScryptHasher hasher;
    BlockHeader header = tmpl;
    for (std::uint64_t n = first + offset; n <= last; n += lanes) {
      if (n >= best.load(std::memory_order_acquire)) break;
      header.nonce = static_cast<Word32>(n);
      const Digest256 digest = hasher(serialize_header(header));
      tried.fetch_add(1, std::memory_order_relaxed);
      if (meets_target(digest, target)) {
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (n < cur &&
               !best.compare_exchange_weak(cur, n, std::memory_order_acq_rel)) {
        }
        break;
      }
    }
  };

  const auto start = std::chrono::steady_clock::now();
  if (lanes == 1) {
    lane(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(lanes);
    for (std::uint64_t w = 0; w < lanes; ++w) pool.emplace_back(lane, w);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  MiningResult r;
  if (const auto b = best.load(); b != kNone) r.found_nonce = static_cast<Word32>(b);
  r.hashes_tried = tried.load();
  r.elapsed_seconds = elapsed;
  r.hash_rate = elapsed > 0 ? static_cast<double>(r.hashes_tried) / elapsed : 0.0;
  return r;
}

/// Hashes successive nonces of `tmpl` for at least `duration_seconds` of
/// wall time and returns hashes per second.
inline double measure_hashrate(double duration_seconds, const BlockHeader& tmpl = {}) {
  if (!(duration_seconds >= 1.0))
    throw ParameterError("measure_hashrate: duration must be >= 1 s");
  using Clock = std::chrono::steady_clock;
  ScryptHasher hasher;
  BlockHeader header = tmpl;
  std::uint64_t hashes = 0;
  const auto start = Clock::now();
  double elapsed = 0;
  do {
    header.nonce = static_cast<Word32>(tmpl.nonce + hashes);
    (void)hasher(serialize_header(header));
    ++hashes;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < duration_seconds);
  return static_cast<double>(hashes) / elapsed;
}

}  // namespace scryptforge
