#pragma once

#include <cmath>
#include <cstdint>

namespace lab {

// Splittable counter-style generator: each stream is derived from
// (seed, stream index) so parallel consumers never share state and
// reruns are bit-identical on any worker count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in (0,1), 53-bit resolution, never exactly 0.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

// Box-Muller on top of SplitMix64; self-contained so results do not
// depend on the standard library's normal_distribution implementation.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}
  GaussianRng(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = rng_.next_double();
    const double u2 = rng_.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double uniform() { return rng_.next_double(); }

 private:
  SplitMix64 rng_;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace lab
