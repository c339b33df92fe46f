#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoi {

// Seeded 64-bit Mersenne Twister with explicit variate transforms, so a
// given seed yields the same stream on every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aoi
