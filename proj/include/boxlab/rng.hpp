#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace boxlab {

// Seeded random stream with explicit floating-point generation. The
// standard distributions are implementation-defined, so every draw here
// is built directly from mt19937_64 output to keep results identical
// across compilers and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream for run `index` of a batch.
  static Rng for_run(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed * 0x9e3779b97f4a7c15ULL + index + 1);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Uniform index in [0, n).
  std::size_t next_index(std::size_t n) {
    auto idx = static_cast<std::size_t>(next_double() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
  }

  // Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * next_normal();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace boxlab
