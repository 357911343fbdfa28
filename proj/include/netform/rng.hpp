#pragma once

#include <cstdint>

namespace netform {

/// SplitMix64 (Steele, Lea, Vigna). Chosen over the standard-library engines
/// because its output is pinned byte-for-byte by its definition on every
/// platform, it is splittable, and the whole generator is ten lines. Traces
/// record the generator id ("splitmix64") so they stay portable across builds.
class SplitMix64 {
 public:
  static constexpr const char* kGeneratorId = "splitmix64";

  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from [0, bound) by rejection; bound must be nonzero.
  constexpr std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Derives an independent child generator; advances this generator once.
  constexpr SplitMix64 split() { return SplitMix64(next()); }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace netform
