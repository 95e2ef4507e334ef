// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace gpgof {

// splitmix64 step: advances state and returns a mixed 64-bit value.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless substream derivation. Chaining derive_seed calls with distinct
// salts gives decorrelated seeds that are a pure function of the inputs,
// so replicate streams are identical no matter which thread runs them.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base + 0x9E3779B97F4A7C15ull * (salt + 0x632BE59BD9B4E019ull);
  return splitmix64_next(s);
}

// FNV-1a, used to fold textual identifiers (alternative descriptors) into
// seed derivation chains.
inline std::uint64_t hash_label(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Fixed salts for the independent consumers of one derived seed.
inline constexpr std::uint64_t kSaltData = 0xDA7A0001ull;
inline constexpr std::uint64_t kSaltBootstrap = 0xB007ull;
inline constexpr std::uint64_t kSaltDiagnostics = 0xD1A6ull;
inline constexpr std::uint64_t kSaltExperiment = 0x51E0ull;

// xoshiro256** stream. Small, fast, and bit-reproducible across platforms,
// which the resampling determinism guarantees rely on.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Bias is O(n / 2^64), far below anything a
  // statistical check at our sample sizes can resolve.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace gpgof
