#pragma once

#include "safctl/network.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Ground-truth nonlinear plant: occupancies plus the backlog of vehicles
// blocked outside full links.  Invariants (0 <= x <= x_max, x_b >= 0) are
// asserted after every step, never restored by clamping.
struct SimState {
  VecX x;    // occupancies (veh)
  VecX x_b;  // accumulated blocked vehicles (veh)
  long k = 0;

  static SimState zero(int links) {
    SimState s;
    s.x = VecX::Zero(links);
    s.x_b = VecX::Zero(links);
    return s;
  }
};

// Which end of a turn the congestion gate inspects.  The physical reading
// stops a link's outflow when a link it feeds is congested; the alternate
// reading inspects the links feeding it instead.
enum class BlockingGate { kDownstream, kUpstream };

// Realized outflow: zero when the gate finds a congested neighbour above
// c_ug * x_max, otherwise the commanded flow limited by what the link holds.
VecX nonlinear_outflow(const VecX& x, const VecX& u_cmd, const TrafficNetwork& net,
                       double c_ug, double tick,
                       BlockingGate gate = BlockingGate::kDownstream);

// One tick of length `tick` seconds.  Demand that finds its link full joins
// the blocked backlog; stored backlog drains back in when space frees up.
SimState step(const SimState& state, const VecX& u_cmd, const VecX& e,
              const TrafficNetwork& net, double c_ug, double tick,
              BlockingGate gate = BlockingGate::kDownstream);

}  // namespace safctl
