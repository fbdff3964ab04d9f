#pragma once

#include "safctl/network.hpp"
#include "safctl/simulator.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Joint filters track occupancy and exogenous demand per link from the noisy
// occupancy measurement; occupancy-only filters track occupancy alone and
// substitute the historic demand in the prediction.
enum class EstimatorMode { kJoint, kOccupancyOnly };

struct EstimatorBank {
  EstimatorMode mode = EstimatorMode::kJoint;
  double period = 0.0;  // estimation sampling period (s)
  VecX x_hat;           // filtered occupancies (veh)
  VecX e_hat;           // filtered demands (veh/s); e_hist in occupancy-only mode
  VecX kx;              // occupancy gains
  VecX ke;              // demand gains, zero in occupancy-only mode
  VecX qx, qe, r;       // per-link noise covariances
  VecX e_hist;          // historic demand (veh/s)
  bool initialized = false;
};

// Per-link covariance defaults: Qx = (S_z E/10)^2, Qe = (S_z E/1000)^2,
// R = (0.05 x_max/4)^2.  Any can be overridden with explicit vectors.
VecX default_qx(const TrafficNetwork& net, double period);
VecX default_qe(const TrafficNetwork& net, double period);
VecX default_r(const TrafficNetwork& net);

// Solves every link's steady-state gain.  Estimates start uninitialized; the
// first measurement seeds x_hat and e_hat = e_hist.
EstimatorBank make_estimator_bank(const TrafficNetwork& net, double period,
                                  EstimatorMode mode, const VecX& qx, const VecX& qe,
                                  const VecX& r, const VecX& e_hist);

// Expected average outflow over one estimation interval, from the filtered
// occupancies (clamped into [0, x_max]) and the running green times.
VecX estimated_outflow(const VecX& x_hat, const VecX& greens, const TrafficNetwork& net,
                       double period, double c_ug,
                       BlockingGate gate = BlockingGate::kDownstream);

// Prediction through the linear model: x_hat += E e + (E/C) B_u u_est with
// e the filtered demand (joint) or the historic constant (occupancy-only).
void predict(EstimatorBank& bank, const VecX& u_est, const TrafficNetwork& net);

// Measurement update x_hat += Kx (y - x_hat), e_hat += Ke (y - x_hat); the
// first call instead seeds the estimates.
void update(EstimatorBank& bank, const VecX& y);

}  // namespace safctl
