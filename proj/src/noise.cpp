#include "safctl/noise.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "safctl/errors.hpp"

namespace safctl {

Biquad bandpass_biquad(double f_lo, double f_hi, double fs) {
  if (!(0.0 < f_lo && f_lo < f_hi && f_hi < fs / 2.0)) {
    throw ConfigError("band edges must satisfy 0 < lo < hi < fs/2");
  }
  const double f0 = std::sqrt(f_lo * f_hi);
  const double q = f0 / (f_hi - f_lo);
  const double w0 = 2.0 * 3.141592653589793238462643383279502884 * f0 / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad bq;
  bq.b0 = alpha / a0;
  bq.b1 = 0.0;
  bq.b2 = -alpha / a0;
  bq.a1 = -2.0 * std::cos(w0) / a0;
  bq.a2 = (1.0 - alpha) / a0;
  return bq;
}

double stationary_std(const Biquad& bq) {
  // State-space form of the section: s+ = A s + B u, y = C s + D u.
  Eigen::Matrix2d a;
  a << -bq.a1, 1.0, -bq.a2, 0.0;
  Eigen::Vector2d b(bq.b1 - bq.a1 * bq.b0, bq.b2 - bq.a2 * bq.b0);

  // Sigma = A Sigma A' + B B' via vectorization (4x4 solve).
  Eigen::Matrix4d lhs = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          lhs(i + 2 * j, k + 2 * l) -= a(i, k) * a(j, l);
        }
      }
    }
  }
  Eigen::Matrix2d bbt = b * b.transpose();
  Eigen::Vector4d rhs(bbt(0, 0), bbt(1, 0), bbt(0, 1), bbt(1, 1));
  Eigen::Vector4d vec = lhs.partialPivLu().solve(rhs);
  Eigen::Matrix2d sigma;
  sigma << vec(0), vec(2), vec(1), vec(3);

  const double var = sigma(0, 0) + bq.b0 * bq.b0;  // C Sigma C' + D^2, C=[1 0]
  return std::sqrt(var);
}

SensorBank::SensorBank(int links, double cycle, double period, const SensorConfig& cfg)
    : cfg_(cfg) {
  if (cfg.white_coef < 0.0 || cfg.colored_coef < 0.0) {
    throw ConfigError("sensor noise coefficients must be nonnegative");
  }
  Biquad proto = bandpass_biquad(1.0 / cycle, 2.0 / cycle, 1.0 / period);
  colored_scale_ = 1.0 / stationary_std(proto);
  white_.reserve(links);
  drive_.reserve(links);
  band_.assign(links, proto);
  for (int z = 0; z < links; ++z) {
    white_.emplace_back(derive_seed(cfg.seed, 2 * z));
    drive_.emplace_back(derive_seed(cfg.seed, 2 * z + 1));
  }
}

VecX SensorBank::measure(const VecX& x) {
  VecX y(x.size());
  for (int z = 0; z < x.size(); ++z) {
    const double psi = white_[z].next();
    const double phi = colored_scale_ * band_[z].step(drive_[z].next());
    y(z) = x(z) * (1.0 + cfg_.white_coef * psi + cfg_.colored_coef * phi);
  }
  return y;
}

}  // namespace safctl
