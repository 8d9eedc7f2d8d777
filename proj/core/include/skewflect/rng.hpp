#pragma once

// Counter-based splittable RNG.
//
// Every draw is a pure function of (seed, stream, step, counter), so chains
// can run on any number of workers and still produce bit-identical output.
// The mixing function is the SplitMix64 finalizer, applied to a keyed
// counter; distinct (stream, step) pairs get distinct subkeys.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skewflect {

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t idx) {
  return mix64(key + kGamma * (idx + 1));
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::derive(detail::mix64(seed + detail::kGamma), stream)) {}

  // Fresh, independent subgenerator (used per step so Box-Muller spares
  // never leak across steps).
  CounterRng substream(std::uint64_t idx) const {
    return CounterRng(detail::derive(key_, idx));
  }

  std::uint64_t next_u64() { return detail::mix64(key_ + detail::kGamma * (++ctr_)); }

  // Uniform on (0,1): never exactly 0 or 1, safe under log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Standard normal via Box-Muller; the spare stays within this generator.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  explicit CounterRng(std::uint64_t raw_key) : key_(raw_key) {}

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace skewflect
