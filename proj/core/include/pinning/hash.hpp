#pragma once

#include <cstdint>

namespace pinning {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// 64-bit finalizer (splitmix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based hash of (seed, counter). All arithmetic is mod 2^64; the
/// counter is the two's-complement encoding of a signed time index.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::int64_t counter) noexcept {
  return mix64(seed + static_cast<std::uint64_t>(counter) * kGoldenGamma);
}

/// Uniform double in [0, 1) from the top 53 bits of a hash value.
constexpr double to_unit_interval(std::uint64_t z) noexcept {
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Deterministic stream of uniforms: draw k is counter_hash(seed, k).
class HashStream {
 public:
  constexpr explicit HashStream(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Independent sub-stream, keyed by an index (path number, instance number, ...).
  constexpr HashStream substream(std::uint64_t index) const noexcept {
    return HashStream(mix64(seed_ + (index + 1) * 0xD1B54A32D192ED03ULL));
  }

  constexpr std::uint64_t next_u64() noexcept { return counter_hash(seed_, counter_++); }
  constexpr double uniform() noexcept { return to_unit_interval(next_u64()); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  constexpr std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::int64_t counter_ = 0;
};

}  // namespace pinning
