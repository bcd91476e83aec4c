#pragma once

// SHA-256 family primitives used by the scrypt pipeline: 32-bit word codecs,
// a streaming SHA-256, HMAC-SHA256 and PBKDF2-HMAC-SHA256.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scryptforge/error.hpp"

namespace scryptforge {

using Word32 = std::uint32_t;
using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// ---------------------------------------------------------------------------
// Word codecs

constexpr Word32 be32_decode(std::span<const std::uint8_t, 4> p) noexcept {
  return Word32{p[3]} | (Word32{p[2]} << 8) | (Word32{p[1]} << 16) |
         (Word32{p[0]} << 24);
}

constexpr Word32 be32_decode(const std::array<std::uint8_t, 4>& a) noexcept {
  return be32_decode(std::span<const std::uint8_t, 4>(a));
}

inline Word32 be32_decode(ByteView p) {
  if (p.size() != 4) throw InputSizeError("be32_decode", 4, p.size());
  return be32_decode(p.first<4>());
}

constexpr void be32_encode(std::span<std::uint8_t, 4> p, Word32 x) noexcept {
  p[3] = static_cast<std::uint8_t>(x);
  p[2] = static_cast<std::uint8_t>(x >> 8);
  p[1] = static_cast<std::uint8_t>(x >> 16);
  p[0] = static_cast<std::uint8_t>(x >> 24);
}

constexpr std::array<std::uint8_t, 4> be32_encode(Word32 x) noexcept {
  std::array<std::uint8_t, 4> out{};
  be32_encode(out, x);
  return out;
}

constexpr Word32 le32_decode(std::span<const std::uint8_t, 4> p) noexcept {
  return Word32{p[0]} | (Word32{p[1]} << 8) | (Word32{p[2]} << 16) |
         (Word32{p[3]} << 24);
}

constexpr Word32 le32_decode(const std::array<std::uint8_t, 4>& a) noexcept {
  return le32_decode(std::span<const std::uint8_t, 4>(a));
}

inline Word32 le32_decode(ByteView p) {
  if (p.size() != 4) throw InputSizeError("le32_decode", 4, p.size());
  return le32_decode(p.first<4>());
}

constexpr void le32_encode(std::span<std::uint8_t, 4> p, Word32 x) noexcept {
  p[0] = static_cast<std::uint8_t>(x);
  p[1] = static_cast<std::uint8_t>(x >> 8);
  p[2] = static_cast<std::uint8_t>(x >> 16);
  p[3] = static_cast<std::uint8_t>(x >> 24);
}

constexpr std::array<std::uint8_t, 4> le32_encode(Word32 x) noexcept {
  std::array<std::uint8_t, 4> out{};
  le32_encode(out, x);
  return out;
}

// ---------------------------------------------------------------------------
// Hex

namespace detail {

constexpr int hex_nibble(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

inline std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

// Accepts upper or lower case; no prefix, no separators.
inline Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw FormatError(std::string(hex), "hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = detail::hex_nibble(hex[2 * i]);
    const int lo = detail::hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw FormatError(std::string(hex), "invalid hex digit at offset " +
                                              std::to_string(2 * i));
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Digest256

struct Digest256 {
  std::array<std::uint8_t, 32> bytes{};

  static Digest256 from_hex(std::string_view hex) {
    if (hex.size() != 64)
      throw FormatError(std::string(hex), "digest hex must be 64 characters");
    Digest256 d;
    const Bytes raw = scryptforge::from_hex(hex);
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
  }

  std::string hex() const { return to_hex(bytes); }

  friend bool operator==(const Digest256&, const Digest256&) = default;
  friend auto operator<=>(const Digest256&, const Digest256&) = default;
};

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4)

class Sha256 {
 public:
  static constexpr std::size_t kBlockSize = 64;
  static constexpr std::size_t kDigestSize = 32;

  Sha256() noexcept { reset(); }

  void reset() noexcept {
    state_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
              0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    total_bytes_ = 0;
    buffered_ = 0;
    compressions_ = 0;
    finalized_ = false;
  }

  Sha256& update(ByteView data) {
    if (finalized_) throw StateError("Sha256::update after final");
    total_bytes_ += data.size();
    std::size_t off = 0;
    if (buffered_ > 0) {
      const std::size_t take = std::min(kBlockSize - buffered_, data.size());
      std::copy_n(data.begin(), take, buffer_.begin() + buffered_);
      buffered_ += take;
      off = take;
      if (buffered_ < kBlockSize) return *this;
      compress(buffer_.data());
      buffered_ = 0;
    }
    for (; off + kBlockSize <= data.size(); off += kBlockSize)
      compress(data.data() + off);
    std::copy(data.begin() + off, data.end(), buffer_.begin());
    buffered_ = data.size() - off;
    return *this;
  }

  Digest256 final() {
    if (finalized_) throw StateError("Sha256::final called twice");
    const std::uint64_t bit_len = total_bytes_ * 8;
    std::array<std::uint8_t, kBlockSize * 2> pad{};
    pad[0] = 0x80;
    const std::size_t pad_len =
        (buffered_ < 56 ? 56 - buffered_ : 120 - buffered_);
    for (int i = 0; i < 8; ++i)
      pad[pad_len + i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
    update(std::span(pad).first(pad_len + 8));
    finalized_ = true;

    Digest256 out;
    for (std::size_t i = 0; i < 8; ++i)
      be32_encode(std::span(out.bytes).subspan(4 * i).first<4>(), state_[i]);
    return out;
  }

  // Number of 64-byte blocks pushed through the compression function.
  std::uint64_t compressions() const noexcept { return compressions_; }
  bool finalized() const noexcept { return finalized_; }

 private:
  static constexpr std::array<Word32, 64> kRound = {
      0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
      0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
      0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
      0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
      0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
      0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
      0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
      0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
      0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
      0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
      0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

  void compress(const std::uint8_t* block) noexcept {
    std::array<Word32, 64> w;
    for (std::size_t i = 0; i < 16; ++i)
      w[i] = be32_decode(std::span<const std::uint8_t, 4>(block + 4 * i, 4));
    for (std::size_t i = 16; i < 64; ++i) {
      const Word32 s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^
                        (w[i - 15] >> 3);
      const Word32 s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^
                        (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }

    Word32 a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    Word32 e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (std::size_t i = 0; i < 64; ++i) {
      const Word32 s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
      const Word32 ch = (e & f) ^ (~e & g);
      const Word32 t1 = h + s1 + ch + kRound[i] + w[i];
      const Word32 s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
      const Word32 maj = (a & b) ^ (a & c) ^ (b & c);
      const Word32 t2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
    ++compressions_;
  }

  std::array<Word32, 8> state_{};
  std::array<std::uint8_t, kBlockSize> buffer_{};
  std::uint64_t total_bytes_ = 0;
  std::size_t buffered_ = 0;
  std::uint64_t compressions_ = 0;
  bool finalized_ = false;
};

inline Digest256 sha256(ByteView message) {
  Sha256 ctx;
  ctx.update(message);
  return ctx.final();
}

// ---------------------------------------------------------------------------
// HMAC-SHA256

/// Streaming HMAC-SHA256. Copyable, so a keyed state can be forked, which is
/// what PBKDF2 does for every output block.
class HmacSha256 {
 public:
  explicit HmacSha256(ByteView key) {
    Digest256 hashed_key;
    // Keys longer than one block are replaced by their digest.
    if (key.size() > Sha256::kBlockSize) {
      hashed_key = sha256(key);
      key = hashed_key.bytes;
    }

    std::array<std::uint8_t, Sha256::kBlockSize> pad;
    pad.fill(0x36);
    for (std::size_t i = 0; i < key.size(); ++i) pad[i] ^= key[i];
    inner_.update(pad);

    pad.fill(0x5c);
    for (std::size_t i = 0; i < key.size(); ++i) pad[i] ^= key[i];
    outer_.update(pad);
  }

  HmacSha256& update(ByteView data) {
    if (finalized_) throw StateError("HmacSha256::update after final");
    inner_.update(data);
    return *this;
  }

  Digest256 final() {
    if (finalized_) throw StateError("HmacSha256::final called twice");
    finalized_ = true;
    const Digest256 inner_digest = inner_.final();
    outer_.update(inner_digest.bytes);
    return outer_.final();
  }

  bool finalized() const noexcept { return finalized_; }

 private:
  Sha256 inner_;
  Sha256 outer_;
  bool finalized_ = false;
};

inline Digest256 hmac_sha256(ByteView key, ByteView message) {
  HmacSha256 mac(key);
  mac.update(message);
  return mac.final();
}

// ---------------------------------------------------------------------------
// PBKDF2-HMAC-SHA256

inline constexpr std::uint64_t kPbkdf2MaxOutput = 32ull * 0xffffffffull;

/// Writes PBKDF2(passwd, salt, iterations, out.size()) into `out`.
inline void pbkdf2_sha256(ByteView passwd, ByteView salt,
                          std::uint64_t iterations, std::span<std::uint8_t> out) {
  if (iterations == 0)
    throw ParameterError("pbkdf2_sha256: iteration count must be >= 1");
  if (out.size() > kPbkdf2MaxOutput)
    throw ParameterError("pbkdf2_sha256: dkLen exceeds 32 * (2^32 - 1)");

  HmacSha256 keyed(passwd);
  keyed.update(salt);

  for (std::size_t i = 0; i * 32 < out.size(); ++i) {
    HmacSha256 block = keyed;
    block.update(be32_encode(static_cast<Word32>(i + 1)));
    Digest256 u = block.final();
    Digest256 t = u;

    for (std::uint64_t j = 2; j <= iterations; ++j) {
      u = hmac_sha256(passwd, u.bytes);
      for (std::size_t k = 0; k < 32; ++k) t.bytes[k] ^= u.bytes[k];
    }

    const std::size_t clen = std::min<std::size_t>(32, out.size() - i * 32);
    std::copy_n(t.bytes.begin(), clen, out.begin() + i * 32);
  }
}

inline Bytes pbkdf2_sha256(ByteView passwd, ByteView salt,
                           std::uint64_t iterations, std::size_t dk_len) {
  if (dk_len > kPbkdf2MaxOutput)
    throw ParameterError("pbkdf2_sha256: dkLen exceeds 32 * (2^32 - 1)");
  Bytes out(dk_len);
  pbkdf2_sha256(passwd, salt, iterations, out);
  return out;
}

}  // namespace scryptforge
