#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace gemlab {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for the `index`-th child of `master`. Independent of scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Explicit, seedable, splittable randomness source.
///
/// Bounded draws use mask-and-reject against the next power of two, so the
/// stream is bit-identical across standard library implementations (unlike
/// std::uniform_int_distribution).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t top = bound - 1;
    std::uint64_t mask = top;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = engine_() & mask;
      if (v <= top) return v;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Child generator whose stream does not overlap the parent's in practice.
  Rng split() { return Rng(mix64(engine_() ^ 0xd1b54a32d192ed03ULL)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gemlab
