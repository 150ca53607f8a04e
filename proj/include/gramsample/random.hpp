#pragma once

#include <cmath>
#include <cstdint>

namespace gramsample {

/// Counter-based deterministic generator. The value sequence is a pure
/// function of (seed, stream_id, counter), so distinct stream ids give
/// independent streams that can be consumed concurrently, and replaying a
/// stream never depends on platform or thread schedule.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : base_(mix(seed ^ 0xa0761d6478bd642fULL) ^ mix(stream_id ^ 0xe7037ed1a0b428dbULL)) {}

  std::uint64_t next_u64() {
    return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform deviate in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), rejection-sampled so every value has
  /// equal mass.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal deviate (Box-Muller, cosine branch).
  double next_gaussian() {
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t counter() const { return counter_; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace gramsample
