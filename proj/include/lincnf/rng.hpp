#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace lincnf {

// SplitMix64 (Steele, Lea, Flood 2014). Every random decision in the library
// draws from one of these; a stream is fully determined by its 64-bit seed.
//
// Substreams are derived, never shared: `split(label)` hashes the label with
// FNV-1a and mixes it into the current seed, and `derive(seed, index)` gives
// the per-trial stream `seed + index` used by the signing search.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed), seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  bool coin() { return ((*this)() >> 63) != 0; }

  // Uniform in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = max() - max() % bound;
    for (;;) {
      std::uint64_t r = (*this)();
      if (r < limit)
        return r % bound;
    }
  }

  std::uint64_t seed() const { return seed_; }

  SplitMix64 split(std::string_view label) const {
    return SplitMix64(mix(seed_ ^ fnv1a(label)));
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

private:
  std::uint64_t state_;
  std::uint64_t seed_;
};

inline constexpr std::uint64_t kDefaultSeed = 1;

} // namespace lincnf
