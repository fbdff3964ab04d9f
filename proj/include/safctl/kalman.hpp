#pragma once

#include <limits>

#include <Eigen/Dense>

#include "safctl/errors.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Steady-state Kalman filter for x+ = A x + w, y = C x + v with
// cov(w) = Q, cov(v) = R.  Iterates the filter Riccati recursion
//   S- = A S A' + Q,  K = S- C' (C S- C' + R)^-1,  S = (I - K C) S-
// until the predicted covariance settles.
template <typename Scalar>
struct FilterGains {
  Mat<Scalar> gain;      // n x m
  Mat<Scalar> cov_pred;  // predicted error covariance
  Mat<Scalar> cov_filt;  // filtered error covariance
};

template <typename Scalar>
FilterGains<Scalar> steady_state_filter(const Mat<Scalar>& a, const Mat<Scalar>& c,
                                        const Mat<Scalar>& q, const Mat<Scalar>& r) {
  const int n = static_cast<int>(a.rows());
  Mat<Scalar> cov = q;
  Mat<Scalar> cov_pred;
  Mat<Scalar> gain;
  Mat<Scalar> prev = Mat<Scalar>::Constant(n, n, std::numeric_limits<Scalar>::infinity());
  for (long iter = 0; iter < tol::kDareMaxIter; ++iter) {
    cov_pred = a * cov * a.transpose() + q;
    Mat<Scalar> innovation = c * cov_pred * c.transpose() + r;
    gain = innovation.ldlt().solve(c * cov_pred).transpose();
    cov = (Mat<Scalar>::Identity(n, n) - gain * c) * cov_pred;
    cov = ((cov + cov.transpose()) / Scalar(2)).eval();
    const Scalar delta = (cov_pred - prev).template lpNorm<Eigen::Infinity>();
    if (delta < Scalar(tol::kFilter)) {
      return {gain, cov_pred, cov};
    }
    prev = cov_pred;
  }
  throw ModelError("filter Riccati iteration did not converge");
}

}  // namespace safctl
