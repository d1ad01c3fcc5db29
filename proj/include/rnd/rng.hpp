#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rnd {

// All randomness in this project flows through RandomStream so that results
// are reproducible bit-for-bit across platforms.  The generator is
// std::mt19937_64, whose output sequence is pinned by the C++ standard; the
// mappings from raw 64-bit words to uniforms, bounded integers and normal
// deviates are written out below instead of relying on the (implementation
// defined) standard distributions.

// splitmix64 finalizer, used only to derive well-separated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives the seed of an auxiliary stream (per label, per chunk, per row...)
// from a user seed and a tag.  Streams with distinct tags are decorrelated.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on (0, 1]: the top 53 bits shifted into the unit interval.  The
  // +1 keeps the value strictly positive so logarithms below are safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) by masked rejection.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < n) return v;
    }
  }

  // Standard normal deviates via the Box-Muller transform; the second member
  // of each pair is cached so one normal consumes one uniform pair amortized.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rnd
