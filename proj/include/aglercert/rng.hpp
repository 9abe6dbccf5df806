#pragma once

#include <complex>
#include <numbers>
#include <random>

namespace aglercert {

// Deterministic RNG used by the instance generator and the samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::complex<double> cgaussian() {
    double re = gaussian(), im = gaussian();
    return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
  }
  std::complex<double> torus_point() {
    double th = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, th);
  }
  std::complex<double> disk_point(double radius = 1.0) {
    double r = radius * std::sqrt(uniform(0.0, 1.0));
    double th = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(r, th);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  std::uint64_t next_seed() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace aglercert
