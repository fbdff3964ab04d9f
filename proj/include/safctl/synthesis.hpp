#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "safctl/errors.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Offline gain synthesis for the store-and-forward plant
//   x(k+1) = x(k) + Bg g(k) + C e(k).
// The state matrix is the identity, so the pair (I, Bg) is controllable only
// on the column space of Bg.  Gains are synthesised on that subspace and
// lifted back with zeros on the uncontrollable complement.

template <typename Scalar>
int controllability_rank(const Mat<Scalar>& bg) {
  Eigen::JacobiSVD<Mat<Scalar>> svd(bg);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const Scalar cutoff =
      Scalar(std::max(bg.rows(), bg.cols())) * sv(0) * Scalar(tol::kRankRel);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

// Orthonormal change of basis splitting the state space into the reachable
// subspace (first `rank` coordinates) and its orthogonal complement.
template <typename Scalar>
struct Decomposition {
  Mat<Scalar> w;       // columns: reachable basis first, complement after
  Mat<Scalar> w_inv;   // = w transposed (w is orthonormal)
  Mat<Scalar> bg1;     // reachable-block input matrix, rank x s
  int rank = 0;
};

template <typename Scalar>
Decomposition<Scalar> build_decomposition(const Mat<Scalar>& bg) {
  Decomposition<Scalar> d;
  Eigen::JacobiSVD<Mat<Scalar>> svd(bg, Eigen::ComputeFullU);
  d.rank = controllability_rank(bg);
  d.w = svd.matrixU();
  d.w_inv = d.w.transpose();
  Mat<Scalar> lifted = d.w_inv * bg;
  d.bg1 = lifted.topRows(d.rank);
  // The complement rows must carry no input authority; anything above noise
  // level means the rank cut was wrong.
  if (d.rank < bg.rows()) {
    const Scalar leak = lifted.bottomRows(bg.rows() - d.rank)
                            .template lpNorm<Eigen::Infinity>();
    if (leak > Scalar(tol::kDecompZero)) {
      throw ModelError("reachable-subspace split leaked input authority");
    }
  }
  return d;
}

// State weight diag(1/x_max) expressed in the reachable coordinates.
template <typename Scalar>
Mat<Scalar> build_q1(const Decomposition<Scalar>& d, const Vec<Scalar>& x_max) {
  Mat<Scalar> w1 = d.w.leftCols(d.rank);
  return w1.transpose() * x_max.cwiseInverse().asDiagonal() * w1;
}

// Fixed-point solve of the discrete Riccati equation for A = I:
//   P = Q + P (I - B K),  K = (R + B' P B)^-1 B' P.
// Each iterate is symmetrised; convergence is checked in the infinity norm.
template <typename Scalar>
Mat<Scalar> solve_dare_identity(const Mat<Scalar>& b, const Mat<Scalar>& q,
                                const Mat<Scalar>& r) {
  const int n = static_cast<int>(q.rows());
  Mat<Scalar> p = q;
  for (long iter = 0; iter < tol::kDareMaxIter; ++iter) {
    Mat<Scalar> gain =
        (r + b.transpose() * p * b).ldlt().solve(b.transpose() * p);
    Mat<Scalar> next = q + p * (Mat<Scalar>::Identity(n, n) - b * gain);
    next = ((next + next.transpose()) / Scalar(2)).eval();
    const Scalar delta = (next - p).template lpNorm<Eigen::Infinity>();
    p = next;
    if (delta < Scalar(tol::kDare)) return p;
  }
  throw ModelError("Riccati iteration did not converge");
}

template <typename Scalar>
Mat<Scalar> feedback_gain(const Mat<Scalar>& b, const Mat<Scalar>& p,
                          const Mat<Scalar>& r) {
  return (r + b.transpose() * p * b).ldlt().solve(b.transpose() * p);
}

// Feedforward gain for a constant disturbance entering as +e each step:
//   Ke = (R + B' P B)^-1 B' (I - (I - B K)')^-1 P.
template <typename Scalar>
Mat<Scalar> feedforward_gain(const Mat<Scalar>& b, const Mat<Scalar>& p,
                             const Mat<Scalar>& r, const Mat<Scalar>& k) {
  const int n = static_cast<int>(p.rows());
  Mat<Scalar> closed = Mat<Scalar>::Identity(n, n) - b * k;
  Mat<Scalar> resolvent = Mat<Scalar>::Identity(n, n) - closed.transpose();
  Mat<Scalar> rhs = resolvent.partialPivLu().solve(p);
  return (r + b.transpose() * p * b).ldlt().solve(b.transpose() * rhs);
}

// General time-invariant regulator with constant additive disturbance, for
// arbitrary (A, B).  Returns the pair (K, Ke) of the stationary law
//   u = -K x - Ke e.
template <typename Scalar>
struct LtiGains {
  Mat<Scalar> p;
  Mat<Scalar> k;
  Mat<Scalar> ke;
};

template <typename Scalar>
LtiGains<Scalar> lti_ff_gains(const Mat<Scalar>& a, const Mat<Scalar>& b,
                              const Mat<Scalar>& q, const Mat<Scalar>& r) {
  const int n = static_cast<int>(a.rows());
  Mat<Scalar> p = q;
  Mat<Scalar> k;
  for (long iter = 0; iter < tol::kDareMaxIter; ++iter) {
    k = (r + b.transpose() * p * b).ldlt().solve(b.transpose() * p * a);
    Mat<Scalar> next = q + a.transpose() * p * (a - b * k);
    next = ((next + next.transpose()) / Scalar(2)).eval();
    const Scalar delta = (next - p).template lpNorm<Eigen::Infinity>();
    p = next;
    if (delta < Scalar(tol::kDare)) break;
    if (iter + 1 == tol::kDareMaxIter) {
      throw ModelError("Riccati iteration did not converge");
    }
  }
  k = (r + b.transpose() * p * b).ldlt().solve(b.transpose() * p * a);
  Mat<Scalar> closed = a - b * k;
  Mat<Scalar> resolvent = Mat<Scalar>::Identity(n, n) - closed.transpose();
  Mat<Scalar> rhs = resolvent.partialPivLu().solve(p);
  Mat<Scalar> ke = (r + b.transpose() * p * b).ldlt().solve(b.transpose() * rhs);
  return {p, k, ke};
}

// Finite-horizon time-varying regulator with known disturbance sequence.
// Backward pass produces per-step state gains and affine terms; the optimal
// input at step k is  u_k = -K_k x_k - Kb_k (P_{k+1} e_k + b_{k+1}).
template <typename Scalar>
struct LtvSolution {
  std::vector<Mat<Scalar>> p;    // size N+1, cost-to-go Hessians
  std::vector<Vec<Scalar>> bias; // size N+1, cost-to-go linear terms
  std::vector<Mat<Scalar>> k;    // size N, state gains
  std::vector<Mat<Scalar>> kb;   // size N, disturbance gains
};

template <typename Scalar>
LtvSolution<Scalar> ltv_lq_recursion(const std::vector<Mat<Scalar>>& a,
                                     const std::vector<Mat<Scalar>>& b,
                                     const std::vector<Mat<Scalar>>& q,
                                     const std::vector<Mat<Scalar>>& r,
                                     const Mat<Scalar>& q_final,
                                     const std::vector<Vec<Scalar>>& e) {
  const int horizon = static_cast<int>(a.size());
  const int n = static_cast<int>(q_final.rows());
  LtvSolution<Scalar> sol;
  sol.p.assign(horizon + 1, Mat<Scalar>());
  sol.bias.assign(horizon + 1, Vec<Scalar>());
  sol.k.assign(horizon, Mat<Scalar>());
  sol.kb.assign(horizon, Mat<Scalar>());
  sol.p[horizon] = q_final;
  sol.bias[horizon] = Vec<Scalar>::Zero(n);
  for (int k = horizon - 1; k >= 0; --k) {
    const Mat<Scalar>& pn = sol.p[k + 1];
    Mat<Scalar> gram = r[k] + b[k].transpose() * pn * b[k];
    auto solver = gram.ldlt();
    sol.k[k] = solver.solve(b[k].transpose() * pn * a[k]);
    sol.kb[k] = solver.solve(b[k].transpose());
    Mat<Scalar> closed = a[k] - b[k] * sol.k[k];
    sol.p[k] = q[k] + a[k].transpose() * pn * closed;
    sol.bias[k] = closed.transpose() * (sol.bias[k + 1] + pn * e[k]);
  }
  return sol;
}

// Forward rollout of the time-varying optimal law from a given start state.
template <typename Scalar>
struct LtvRollout {
  std::vector<Vec<Scalar>> x;  // size N+1
  std::vector<Vec<Scalar>> u;  // size N
};

template <typename Scalar>
LtvRollout<Scalar> ltv_rollout(const LtvSolution<Scalar>& sol,
                               const std::vector<Mat<Scalar>>& a,
                               const std::vector<Mat<Scalar>>& b,
                               const std::vector<Vec<Scalar>>& e,
                               const Vec<Scalar>& x0) {
  const int horizon = static_cast<int>(a.size());
  LtvRollout<Scalar> roll;
  roll.x.assign(horizon + 1, Vec<Scalar>());
  roll.u.assign(horizon, Vec<Scalar>());
  roll.x[0] = x0;
  for (int k = 0; k < horizon; ++k) {
    roll.u[k] = -sol.k[k] * roll.x[k] -
                sol.kb[k] * (sol.p[k + 1] * e[k] + sol.bias[k + 1]);
    roll.x[k + 1] = a[k] * roll.x[k] + b[k] * roll.u[k] + e[k];
  }
  return roll;
}

}  // namespace safctl
