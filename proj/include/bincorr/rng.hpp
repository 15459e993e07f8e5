#pragma once

#include <cstdint>
#include <limits>

namespace bincorr {

// SplitMix64 (Steele, Lea, Flood 2014). Small, fast and seedable from a
// single word, which lets every realization own an independent stream derived
// from (seed, index). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr bool fair_bit() noexcept { return ((*this)() >> 63) != 0; }

  // Returns 0 with probability `p_zero`, 1 otherwise.
  constexpr bool bit_with_zero_prob(double p_zero) noexcept {
    return !(uniform() < p_zero);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Stream for the index-th item of a seeded computation. Depends only on
// (seed, index), so any partition of the index range reproduces the same
// draws.
constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64(SplitMix64::mix(SplitMix64::mix(seed ^ 0x6A09E667F3BCC909ULL) + index));
}

}  // namespace bincorr
