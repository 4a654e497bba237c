#ifndef COMMITREP_RANDOM_HPP
#define COMMITREP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace commitrep {

// 64-bit Mersenne Twister with distribution helpers implemented here rather
// than through <random> distributions, whose output is library-specific.
// Streams are therefore identical on every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Failures before the first success of independent Bernoulli(p) trials;
  // UINT64_MAX stands for "never" when p <= 0.
  std::uint64_t Geometric(double p) {
    if (p >= 1.0) return 0;
    if (p <= 0.0) return UINT64_MAX;
    const double u = 1.0 - Uniform01();  // (0, 1]
    const double k = std::floor(std::log(u) / std::log1p(-p));
    return k >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(k);
  }

  // Uniform integer in [0, n). Requires n > 0. Rejection sampling, no modulo bias.
  std::uint64_t Index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace commitrep

#endif  // COMMITREP_RANDOM_HPP
