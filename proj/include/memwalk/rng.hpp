#pragma once

// Pinned random streams. Changing anything here changes every golden value;
// the exact definitions are documented in docs/interfaces.md.
//
//   key     = splitmix64(master_seed)
//   seed_i  = splitmix64(key + i * 0x9E3779B97F4A7C15)       (mod 2^64)
//   state_i = four successive outputs of a SplitMix64 sequence started at seed_i
//   stream  = xoshiro256** over state_i
//   uniform = (next() >> 11) * 2^-53                          in [0, 1)

#include <array>
#include <cstdint>
#include <limits>

namespace memwalk {

/// One SplitMix64 finalization of x + golden-gamma.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      word = splitmix64(x);
      x += 0x9E3779B97F4A7C15ULL;
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
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

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Independent stream for trajectory `index` under `master_seed`.
constexpr Xoshiro256StarStar trajectory_stream(std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t key = splitmix64(master_seed);
  return Xoshiro256StarStar(splitmix64(key + index * 0x9E3779B97F4A7C15ULL));
}

}  // namespace memwalk
