#include "safctl/estimator.hpp"

#include "safctl/errors.hpp"
#include "safctl/kalman.hpp"

namespace safctl {

VecX default_qx(const TrafficNetwork& net, double period) {
  return (net.sat_flow * period / 10.0).array().square();
}

VecX default_qe(const TrafficNetwork& net, double period) {
  return (net.sat_flow * period / 1000.0).array().square();
}

VecX default_r(const TrafficNetwork& net) {
  return (0.05 * net.x_max / 4.0).array().square();
}

EstimatorBank make_estimator_bank(const TrafficNetwork& net, double period,
                                  EstimatorMode mode, const VecX& qx, const VecX& qe,
                                  const VecX& r, const VecX& e_hist) {
  const int z = net.z_count;
  if (qx.size() != z || qe.size() != z || r.size() != z || e_hist.size() != z) {
    throw ConfigError("dimension mismatch: estimator covariances");
  }
  if ((r.array() <= 0.0).any() || (qx.array() <= 0.0).any()) {
    throw ConfigError("estimator covariances must be positive");
  }
  if (mode == EstimatorMode::kJoint && (qe.array() <= 0.0).any()) {
    throw ConfigError("demand covariance must be positive in joint mode");
  }

  EstimatorBank bank;
  bank.mode = mode;
  bank.period = period;
  bank.x_hat = VecX::Zero(z);
  bank.e_hat = e_hist;
  bank.kx = VecX::Zero(z);
  bank.ke = VecX::Zero(z);
  bank.qx = qx;
  bank.qe = qe;
  bank.r = r;
  bank.e_hist = e_hist;

  for (int i = 0; i < z; ++i) {
    MatX r_mat = MatX::Constant(1, 1, r(i));
    if (mode == EstimatorMode::kJoint) {
      MatX a(2, 2);
      a << 1.0, period, 0.0, 1.0;
      MatX c(1, 2);
      c << 1.0, 0.0;
      MatX q = MatX::Zero(2, 2);
      q(0, 0) = qx(i);
      q(1, 1) = qe(i);
      FilterGains<double> fg = steady_state_filter<double>(a, c, q, r_mat);
      bank.kx(i) = fg.gain(0, 0);
      bank.ke(i) = fg.gain(1, 0);
    } else {
      MatX one = MatX::Identity(1, 1);
      MatX q = MatX::Constant(1, 1, qx(i));
      FilterGains<double> fg = steady_state_filter<double>(one, one, q, r_mat);
      bank.kx(i) = fg.gain(0, 0);
    }
  }
  return bank;
}

VecX estimated_outflow(const VecX& x_hat, const VecX& greens, const TrafficNetwork& net,
                       double period, double c_ug, BlockingGate gate) {
  VecX clamped = x_hat.cwiseMax(0.0).cwiseMin(net.x_max);
  return nonlinear_outflow(clamped, flows_from_greens(greens, net), net, c_ug, period,
                           gate);
}

void predict(EstimatorBank& bank, const VecX& u_est, const TrafficNetwork& net) {
  if (!bank.initialized) return;
  const VecX& demand = bank.mode == EstimatorMode::kJoint ? bank.e_hat : bank.e_hist;
  bank.x_hat += bank.period * demand + (bank.period / net.cycle) * (net.b_u * u_est);
}

void update(EstimatorBank& bank, const VecX& y) {
  if (!bank.initialized) {
    bank.x_hat = y;
    bank.e_hat = bank.e_hist;
    bank.initialized = true;
    return;
  }
  const VecX innovation = y - bank.x_hat;
  bank.x_hat += bank.kx.cwiseProduct(innovation);
  if (bank.mode == EstimatorMode::kJoint) {
    bank.e_hat += bank.ke.cwiseProduct(innovation);
  }
}

}  // namespace safctl
