#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hrfe {

// Bijective 64-bit mixer; used to fold sweep coordinates into stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Standard normal deviates from a seeded mt19937_64.  Box-Muller, cosine
// branch only, so every deviate costs exactly two engine draws and the
// stream is a pure function of its seed.  mt19937_64 output is specified
// bit-for-bit by the standard; cos/log keep runs on one platform identical.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    // log1p(-u1) = log(1-u1) is finite: u1 < 1 exactly.
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(two_pi_ * u2);
  }

 private:
  static constexpr double two_pi_ = 6.28318530717958647692528676655900577;
  std::mt19937_64 eng_;
};

}  // namespace hrfe
