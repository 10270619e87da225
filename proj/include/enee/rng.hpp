#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

namespace enee {

/// SplitMix64 finalizer; bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-derived stream id: one independent seed per
/// (base_seed, hr index, sim index, attempt) tuple, so simulations can run
/// in any order or in parallel without affecting results.
inline std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t hr_index,
                                 std::uint64_t sim_index,
                                 std::uint64_t attempt = 0) {
  std::uint64_t s = mix64(base_seed);
  s = mix64(s ^ (hr_index + 0x5555555555555555ULL));
  s = mix64(s ^ (sim_index + 0xaaaaaaaaaaaaaaabULL));
  s = mix64(s ^ attempt);
  return s;
}

/// Seeded draw stream. The engine is std::mt19937_64 (bit-exact by the
/// standard); variate transforms are explicit inverse-CDF forms so streams
/// reproduce across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform01_open() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer on [lo, hi], inclusive; masked rejection (exact).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 1) return lo;
    const std::uint64_t mask = ~0ULL >> std::countl_zero(range - 1);
    for (;;) {
      const std::uint64_t v = eng_() & mask;
      if (v < range) return lo + static_cast<std::int64_t>(v);
    }
  }

  double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

  /// Weibull with hazard (shape/scale) * (t/scale)^(shape-1).
  double weibull(double shape, double scale) {
    return scale * std::pow(-std::log(uniform01_open()), 1.0 / shape);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace enee
