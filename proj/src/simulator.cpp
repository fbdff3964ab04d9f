#include "safctl/simulator.hpp"

#include <algorithm>
#include <string>

#include "safctl/errors.hpp"

namespace safctl {

namespace {

bool gate_blocked(const VecX& x, const TrafficNetwork& net, double c_ug, int z,
                  BlockingGate gate) {
  for (int w = 0; w < net.z_count; ++w) {
    const bool linked = gate == BlockingGate::kDownstream ? net.feeds(z, w)
                                                          : net.feeds(w, z);
    if (linked && x(w) > c_ug * net.x_max(w)) return true;
  }
  return false;
}

}  // namespace

VecX nonlinear_outflow(const VecX& x, const VecX& u_cmd, const TrafficNetwork& net,
                       double c_ug, double tick, BlockingGate gate) {
  VecX u = VecX::Zero(net.z_count);
  for (int z = 0; z < net.z_count; ++z) {
    if (gate_blocked(x, net, c_ug, z, gate)) continue;
    u(z) = std::min(x(z) / tick, u_cmd(z));
  }
  return u;
}

SimState step(const SimState& state, const VecX& u_cmd, const VecX& e,
              const TrafficNetwork& net, double c_ug, double tick,
              BlockingGate gate) {
  const VecX u_nl = nonlinear_outflow(state.x, u_cmd, net, c_ug, tick, gate);
  const VecX flow = (tick / net.cycle) * (net.b_u * u_nl);

  // Space left after internal flows decides how much demand actually enters;
  // the remainder joins the backlog, and stored backlog re-enters when the
  // deficit is negative (free space).
  VecX e_nl(net.z_count);
  for (int z = 0; z < net.z_count; ++z) {
    const double deficit = e(z) * tick - (net.x_max(z) - state.x(z) - flow(z));
    if (deficit >= 0.0) {
      e_nl(z) = e(z) - deficit / tick;
    } else {
      e_nl(z) = e(z) + std::min(-deficit, state.x_b(z)) / tick;
    }
  }

  SimState next;
  next.x = state.x + flow + tick * e_nl;
  next.x_b = state.x_b - tick * (e_nl - e);
  next.k = state.k + 1;

  for (int z = 0; z < net.z_count; ++z) {
    const bool ok = next.x(z) >= -1e-9 && next.x(z) <= net.x_max(z) + 1e-9 &&
                    next.x_b(z) >= -1e-9;
    if (!ok) {
      throw ModelError("state invariant violated on link " + std::to_string(z + 1) +
                       " (x=" + std::to_string(next.x(z)) +
                       ", x_b=" + std::to_string(next.x_b(z)) + ")");
    }
  }
  return next;
}

}  // namespace safctl
