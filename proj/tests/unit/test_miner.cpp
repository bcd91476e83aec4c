#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "oracle/reference.hpp"
#include "scryptforge/miner.hpp"
#include "support.hpp"

using namespace scryptforge;
using testsupport::kernel_fixtures;

namespace {

BlockHeader genesis() {
  return header_from_hex(
      testsupport::read_trimmed(testsupport::fixture_path("litecoin_genesis_header.hex")));
}

// Expands compact difficulty bits into a big-endian target hex string.
std::string target_hex_from_bits(Word32 bits) {
  const unsigned exponent = bits >> 24;
  const Word32 mantissa = bits & 0x007fffff;
  std::array<std::uint8_t, 32> be{};
  for (unsigned k = 0; k < 3; ++k) {
    const unsigned pos = 32 - exponent + k;
    if (pos < 32) be[pos] = static_cast<std::uint8_t>(mantissa >> (8 * (2 - k)));
  }
  return to_hex(be);
}

BlockHeader random_header(std::mt19937_64& rng) {
  return deserialize_header(testsupport::random_bytes(rng, kHeaderBytes));
}

}  // namespace

TEST(Header, FieldOffsets) {
  BlockHeader h;
  h.version = 0x01020304;
  h.prev_block_hash.fill(0xaa);
  h.merkle_root.fill(0xbb);
  h.time = 0x11223344;
  h.bits = 0x1e0ffff0;
  h.nonce = 0xdeadbeef;
  const auto s = serialize_header(h);
  EXPECT_EQ(s[0], 0x04);
  EXPECT_EQ(s[3], 0x01);
  EXPECT_EQ(s[4], 0xaa);
  EXPECT_EQ(s[35], 0xaa);
  EXPECT_EQ(s[36], 0xbb);
  EXPECT_EQ(s[67], 0xbb);
  EXPECT_EQ(s[68], 0x44);
  EXPECT_EQ(s[72], 0xf0);
  EXPECT_EQ(s[75], 0x1e);
  EXPECT_EQ(s[76], 0xef);
  EXPECT_EQ(s[79], 0xde);
}

TEST(Header, RoundTripRandom) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const Bytes raw = testsupport::random_bytes(rng, kHeaderBytes);
    const BlockHeader h = deserialize_header(raw);
    const auto back = serialize_header(h);
    EXPECT_TRUE(std::equal(back.begin(), back.end(), raw.begin()));
    EXPECT_EQ(deserialize_header(back), h);
  }
}

TEST(Header, AllZero) {
  const auto s = serialize_header(BlockHeader{});
  EXPECT_TRUE(std::all_of(s.begin(), s.end(), [](auto b) { return b == 0; }));
}

TEST(Header, WrongSizesRejected) {
  EXPECT_THROW(deserialize_header(Bytes(79)), InputSizeError);
  EXPECT_THROW(header_from_hex("00"), FormatError);
  EXPECT_THROW(header_from_hex(std::string(160, 'g')), FormatError);
}

TEST(Header, GenesisFields) {
  const BlockHeader g = genesis();
  EXPECT_EQ(g.version, 1u);
  EXPECT_EQ(g.time, 1317972665u);
  EXPECT_EQ(g.bits, 0x1e0ffff0u);
  EXPECT_EQ(g.nonce, 2084524493u);
  EXPECT_EQ(g.prev_block_hash, Hash32{});
}

TEST(Header, GenesisBlockHashAndProofOfWork) {
  const BlockHeader g = genesis();
  const auto raw = serialize_header(g);
  const Bytes bytes(raw.begin(), raw.end());
  // Block identity is double SHA-256, shown byte-reversed.
  Bytes id = oracle::sha256(oracle::sha256(bytes));
  std::reverse(id.begin(), id.end());
  EXPECT_EQ(to_hex(id), "12a765e31ffd4059bada1e25190f6e98c99d9714d334efa41a195a7e7e04bfe2");

  const Target256 target = Target256::from_hex(target_hex_from_bits(g.bits));
  EXPECT_EQ(target.hex(), "00000ffff0000000000000000000000000000000000000000000000000000000");
  EXPECT_TRUE(meets_target(scrypt_1024_1_1_256(raw), target));
  BlockHeader off = g;
  off.nonce += 1;
  EXPECT_FALSE(meets_target(scrypt_1024_1_1_256(serialize_header(off)), target));
}

TEST(Target256, HexIsBigEndianNumeral) {
  const Target256 t = Target256::from_hex(
      "00000000000000000000000000000000000000000000000000000000000001ff");
  EXPECT_EQ(t.le_bytes()[0], 0xff);
  EXPECT_EQ(t.le_bytes()[1], 0x01);
  EXPECT_EQ(t.le_bytes()[31], 0x00);
  EXPECT_EQ(Target256::max().hex(), std::string(64, 'f'));
  EXPECT_LT(t, Target256::max());
  EXPECT_THROW(Target256::from_hex("ff"), FormatError);
}

TEST(MeetsTarget, Boundaries) {
  Digest256 d;
  d.bytes.fill(0);
  d.bytes[31] = 0x10;
  std::array<std::uint8_t, 32> le{};
  le[31] = 0x10;
  EXPECT_TRUE(meets_target(d, Target256::from_le_bytes(le)));  // equal
  d.bytes[0] = 1;
  EXPECT_FALSE(meets_target(d, Target256::from_le_bytes(le)));  // one above
  le[0] = 2;
  EXPECT_TRUE(meets_target(d, Target256::from_le_bytes(le)));
  EXPECT_TRUE(meets_target(d, Target256::max()));
  EXPECT_FALSE(meets_target(d, Target256{}));
  EXPECT_TRUE(meets_target(Digest256{}, Target256{}));
}

TEST(MeetsTarget, AgreesWithBigEndianLexicographicCompare) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 2000; ++t) {
    Digest256 d;
    std::array<std::uint8_t, 32> le;
    for (std::size_t i = 0; i < 32; ++i) {
      d.bytes[i] = static_cast<std::uint8_t>(rng());
      le[i] = static_cast<std::uint8_t>(rng());
    }
    // Share a random-length top prefix so the deciding byte varies.
    const std::size_t shared = rng() % 33;
    for (std::size_t i = 32 - shared; i < 32; ++i) le[i] = d.bytes[i];
    const Bytes dbe(d.bytes.rbegin(), d.bytes.rend());
    const Bytes tbe(le.rbegin(), le.rend());
    EXPECT_EQ(meets_target(d, Target256::from_le_bytes(le)), dbe <= tbe);
  }
}

TEST(MeetsTarget, MonotoneInDigest) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 1000; ++t) {
    Digest256 hi;
    for (auto& b : hi.bytes) b = static_cast<std::uint8_t>(rng());
    Digest256 lo = hi;
    // Lower one byte; everything above it is unchanged, so lo <= hi.
    const std::size_t k = rng() % 32;
    lo.bytes[k] = static_cast<std::uint8_t>(rng() % (hi.bytes[k] + 1));
    std::array<std::uint8_t, 32> le;
    for (auto& b : le) b = static_cast<std::uint8_t>(rng());
    const Target256 target = Target256::from_le_bytes(le);
    if (meets_target(hi, target)) {
      EXPECT_TRUE(meets_target(lo, target));
    }
  }
}

TEST(MineRange, FoundNonceMeetsTargetAndPredecessorsDoNot) {
  const auto& fx = kernel_fixtures()["mining"][3];
  const BlockHeader h = header_from_hex(fx["header"].get<std::string>());
  const Target256 target = Target256::from_hex(fx["target"].get<std::string>());
  const Word32 start = fx["nonce_start"];
  const MiningResult r = mine_range(h, start, start + 400, target, 2);
  ASSERT_TRUE(r.found_nonce);
  BlockHeader at = h;
  for (Word32 n = start; n <= *r.found_nonce; ++n) {
    at.nonce = n;
    EXPECT_EQ(meets_target(scrypt_1024_1_1_256(serialize_header(at)), target),
              n == *r.found_nonce);
  }
}

TEST(MineRange, MaxTargetFindsFirstNonce) {
  std::mt19937_64 rng(33);
  const BlockHeader h = random_header(rng);
  const MiningResult r = mine_range(h, 500, 600, Target256::max());
  ASSERT_TRUE(r.found_nonce);
  EXPECT_EQ(*r.found_nonce, 500u);
  EXPECT_EQ(r.hashes_tried, 1u);
}

TEST(MineRange, ZeroTargetExhaustsRange) {
  std::mt19937_64 rng(34);
  const BlockHeader h = random_header(rng);
  const MiningResult r = mine_range(h, 1000, 2000, Target256{});
  EXPECT_FALSE(r.found_nonce);
  EXPECT_EQ(r.hashes_tried, 1001u);
  EXPECT_GT(r.hash_rate, 0.0);
  const nlohmann::json j = r;
  EXPECT_TRUE(j["found_nonce"].is_null());
}

TEST(MineRange, TopOfNonceSpace) {
  std::mt19937_64 rng(35);
  const BlockHeader h = random_header(rng);
  constexpr Word32 top = std::numeric_limits<Word32>::max();
  const MiningResult r = mine_range(h, top, top, Target256::max(), 4);
  ASSERT_TRUE(r.found_nonce);
  EXPECT_EQ(*r.found_nonce, top);
  const MiningResult none = mine_range(h, top - 2, top, Target256{}, 2);
  EXPECT_EQ(none.hashes_tried, 3u);
}

TEST(MineRange, InvalidArguments) {
  EXPECT_THROW(mine_range({}, 10, 9, Target256::max()), ParameterError);
  EXPECT_THROW(mine_range({}, 0, 9, Target256::max(), 0), ParameterError);
}

TEST(MineRange, FixturesSolvedAtExpectedNonceForAnyWorkerCount) {
  for (const auto& fx : kernel_fixtures()["mining"]) {
    const BlockHeader h = header_from_hex(fx["header"].get<std::string>());
    const Target256 target = Target256::from_hex(fx["target"].get<std::string>());
    const Word32 start = fx["nonce_start"];
    const Word32 solve = fx["solving_nonce"];
    for (unsigned w : {1u, 3u}) {
      const MiningResult r = mine_range(h, start, solve + 5, target, w);
      ASSERT_TRUE(r.found_nonce) << "workers " << w;
      EXPECT_EQ(*r.found_nonce, solve) << "workers " << w;
      if (w == 1) {
        EXPECT_EQ(r.hashes_tried, solve - start + 1);
      }
    }
    BlockHeader at = h;
    at.nonce = solve;
    EXPECT_EQ(scrypt_1024_1_1_256(serialize_header(at)).hex(), fx["digest"]);
  }
}

TEST(MeasureHashrate, RejectsShortWindows) {
  EXPECT_THROW(measure_hashrate(0.5), ParameterError);
  EXPECT_THROW(measure_hashrate(-1), ParameterError);
}

TEST(MeasureHashrate, PlausibleAndRepeatable) {
  const double a = measure_hashrate(5.0);
  const double b = measure_hashrate(5.0);
  EXPECT_GE(a, 1e3);
  EXPECT_LE(a, 1e6);
  EXPECT_LE(std::abs(a - b), 0.25 * std::max(a, b)) << a << " vs " << b;
}
