#pragma once

// Independent reference implementations used only by tests. Deliberately
// naive: dense enumeration and stacked least squares, no shared code with
// the library under test beyond Eigen.

#include <safctl/types.hpp>

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace safctl::oracle {

// Finite-horizon LQ tracking solved as one dense quadratic program over the
// stacked input vector. Dynamics x_{k+1} = A_k x_k + B_k u_k + e_k, cost
// sum_k (x_k' Q_k x_k + u_k' R_k u_k) + x_N' Q_N x_N with k = 0..N-1.
struct DenseLqSolution {
  MatX inputs;   // N x m, row k is u_k
  double cost = 0.0;
};

inline DenseLqSolution dense_lq(const std::vector<MatX>& a,
                                const std::vector<MatX>& b,
                                const std::vector<MatX>& q,
                                const std::vector<MatX>& r,
                                const std::vector<VecX>& e,
                                const MatX& q_terminal, const VecX& x0) {
  const int horizon = static_cast<int>(a.size());
  const int n = static_cast<int>(x0.size());
  const int m = static_cast<int>(b.front().cols());

  // x_k = phi_k x0 + sum_j G(k,j) u_j + d_k, built by forward recursion.
  std::vector<MatX> phi(horizon + 1);
  std::vector<VecX> drift(horizon + 1);
  std::vector<std::vector<MatX>> gain(horizon + 1);
  phi[0] = MatX::Identity(n, n);
  drift[0] = VecX::Zero(n);
  gain[0] = {};
  for (int k = 0; k < horizon; ++k) {
    phi[k + 1] = a[k] * phi[k];
    drift[k + 1] = a[k] * drift[k] + e[k];
    gain[k + 1].resize(k + 1);
    for (int j = 0; j < k; ++j) gain[k + 1][j] = a[k] * gain[k][j];
    gain[k + 1][k] = b[k];
  }

  MatX hessian = MatX::Zero(horizon * m, horizon * m);
  VecX linear = VecX::Zero(horizon * m);
  for (int k = 0; k <= horizon; ++k) {
    const MatX& qk = (k == horizon) ? q_terminal : q[k];
    const VecX base = phi[k] * x0 + drift[k];
    for (int i = 0; i < static_cast<int>(gain[k].size()); ++i) {
      if (gain[k][i].size() == 0) continue;
      linear.segment(i * m, m) += gain[k][i].transpose() * qk * base;
      for (int j = 0; j < static_cast<int>(gain[k].size()); ++j) {
        if (gain[k][j].size() == 0) continue;
        hessian.block(i * m, j * m, m, m) +=
            gain[k][i].transpose() * qk * gain[k][j];
      }
    }
  }
  for (int k = 0; k < horizon; ++k)
    hessian.block(k * m, k * m, m, m) += r[k];

  const VecX stacked = hessian.ldlt().solve(-linear);

  DenseLqSolution sol;
  sol.inputs = MatX::Zero(horizon, m);
  for (int k = 0; k < horizon; ++k)
    sol.inputs.row(k) = stacked.segment(k * m, m).transpose();

  VecX x = x0;
  for (int k = 0; k < horizon; ++k) {
    const VecX u = sol.inputs.row(k).transpose();
    sol.cost += x.dot(q[k] * x) + u.dot(r[k] * u);
    x = a[k] * x + b[k] * u + e[k];
  }
  sol.cost += x.dot(q_terminal * x);
  return sol;
}

// Projection of raw onto {g : g >= lower, sum(g) = budget} by trying every
// subset of bounds as the active set and keeping the feasible KKT point
// with the smallest squared distance.
inline VecX enumerate_projection(const VecX& raw, const VecX& lower,
                                 double budget) {
  const int n = static_cast<int>(raw.size());
  double best_cost = std::numeric_limits<double>::infinity();
  VecX best = lower;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double clamped_sum = 0.0;
    double free_sum = 0.0;
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        clamped_sum += lower[i];
      } else {
        free_sum += raw[i];
        ++free_count;
      }
    }
    VecX cand(n);
    if (free_count == 0) {
      if (std::abs(clamped_sum - budget) > 1e-7) continue;
      cand = lower;
    } else {
      const double shift = (budget - clamped_sum - free_sum) / free_count;
      bool feasible = true;
      for (int i = 0; i < n; ++i) {
        if (mask & (1 << i)) {
          cand[i] = lower[i];
        } else {
          cand[i] = raw[i] + shift;
          if (cand[i] < lower[i] - 1e-12) feasible = false;
        }
      }
      if (!feasible) continue;
    }
    const double cost = (cand - raw).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = cand;
    }
  }
  return best;
}

}  // namespace safctl::oracle
