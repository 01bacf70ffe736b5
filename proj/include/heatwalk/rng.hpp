#pragma once
/**
 * Counter-derived random streams for reproducible parallel Monte Carlo.
 *
 * A stream is addressed by (master seed, stream index). The pair is hashed
 * through splitmix64 into the state of a xoshiro256++ generator, so
 *   - the same pair always yields the same bit-exact sequence, and
 *   - distinct indices yield statistically independent streams,
 * independent of how walks are scheduled across threads.
 *
 * Streams are single-owner: create one per walk, never share.
 */

#include <cstdint>

namespace heatwalk {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t z = seed;
    std::uint64_t a = splitmix(z);
    std::uint64_t b = splitmix(z);
    z = a ^ (stream_index * 0xD1342543DE82EF95ull + b);
    for (auto& word : state_) word = splitmix(z);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard Gaussian via the Marsaglia polar method (pair cached).
  double next_gaussian();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4] = {};
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace heatwalk
