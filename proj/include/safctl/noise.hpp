#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "safctl/types.hpp"

namespace safctl {

// Seed mixing and Gaussian generation are hand-rolled so traces are
// bit-identical across standard libraries; std::normal_distribution's
// algorithm is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent sub-seed for stream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0x9E3779B97F4A7C15ull * (index + 1));
  return splitmix64(state);
}

// Unit Gaussian stream: Box-Muller over mt19937_64 uniforms.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Uniform stream over [0,1) with the same bit-stable contract.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : rng_(seed) {}

  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 rng_;
};

// Second-order band-pass section (direct form II transposed).
struct Biquad {
  double b0 = 0, b1 = 0, b2 = 0;  // numerator
  double a1 = 0, a2 = 0;          // denominator (a0 normalized to 1)
  double s1 = 0, s2 = 0;          // state, starts at rest

  double step(double u) {
    const double y = b0 * u + s1;
    s1 = b1 * u - a1 * y + s2;
    s2 = b2 * u - a2 * y;
    return y;
  }
};

// Band-pass with peak at the geometric centre of [f_lo, f_hi] and bandwidth
// matching the band, sampled at fs.
Biquad bandpass_biquad(double f_lo, double f_hi, double fs);

// Stationary output standard deviation of the section under unit-variance
// white input, from the exact 2x2 discrete Lyapunov solution.
double stationary_std(const Biquad& bq);

// Per-link sensor noise: y = x (1 + white_coef psi + colored_coef phi) with
// psi unit white Gaussian and phi unit-variance colored noise band-limited to
// [1/cycle, 2/cycle] Hz at the estimation sampling rate 1/period.
struct SensorConfig {
  double white_coef = 0.05;
  double colored_coef = 0.4;
  std::uint64_t seed = 0;
};

class SensorBank {
 public:
  SensorBank(int links, double cycle, double period, const SensorConfig& cfg);

  // Advances every link's noise streams by one estimation step.
  VecX measure(const VecX& x);

 private:
  SensorConfig cfg_;
  double colored_scale_;
  std::vector<GaussianStream> white_;
  std::vector<GaussianStream> drive_;
  std::vector<Biquad> band_;
};

}  // namespace safctl
