#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace isinglb {

/// SplitMix64 (Steele, Lea & Flood). Platform-independent, and its finalizer
/// doubles as the seed-mixing function for per-sample / per-trial streams.
class SplitMix64 {
 public:
  static constexpr std::string_view kGeneratorId = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    while (true) {
      const std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Folds several indices into a seed: mix(...mix(mix(seed) ^ i0) ^ i1...).
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t z = SplitMix64::mix(seed);
  for (std::uint64_t i : indices) z = SplitMix64::mix(z ^ (i + 0x9e3779b97f4a7c15ULL));
  return z;
}

}  // namespace isinglb
