#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace archetypal {

/// SplitMix64 finalizer; used to derive decorrelated sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic seed for a named sub-task of a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

/// Counter-based generator: Philox4x32 with 10 rounds.
///
/// A stream is addressed by (seed, stream). Draw k of stream s is a pure
/// function of (seed, s, k), so sample programs can be partitioned across
/// any number of workers without changing a single bit of output.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    ctr_ = {0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    pos_ = 4;
  }

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      block();
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0,1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate (inverse CDF of the tail, never log(0)).
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  /// Uniform double on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// One Philox block for (ctr, key); exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& ctr,
                                            const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> x = ctr;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = kMulA * static_cast<std::uint64_t>(x[0]);
      const std::uint64_t p1 = kMulB * static_cast<std::uint64_t>(x[2]);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0), hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1), hi1 = static_cast<std::uint32_t>(p1 >> 32);
      x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
      k[0] += kWeylA;
      k[1] += kWeylB;
    }
    return x;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  void block() {
    buf_ = block(ctr_, key_);
    if (++ctr_[0] == 0u) ++ctr_[1];  // 2^64 blocks per stream
  }

  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_;
};

}  // namespace archetypal
