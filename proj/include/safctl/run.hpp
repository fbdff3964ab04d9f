#pragma once

#include <string>
#include <vector>

#include "safctl/estimator.hpp"
#include "safctl/gains.hpp"
#include "safctl/network.hpp"
#include "safctl/scenario.hpp"
#include "safctl/simulator.hpp"
#include "safctl/types.hpp"

namespace safctl {

// One closed-loop run sampled at the simulation tick.  Row k describes the
// interval [k dt, (k+1) dt): plant state at its start, the demand applied
// over it, and the latest measurement/estimates held from the estimation
// grid.
struct RunTrace {
  double tick_s = 0.0;
  std::vector<double> time_s;
  MatX x;       // occupancies at interval start (veh)
  MatX x_b;     // blocked backlog at interval start (veh)
  MatX y;       // held measurement (veh)
  MatX x_hat;   // held filtered occupancy (veh)
  MatX e_hat;   // held filtered demand (veh/s)
  MatX e_true;  // applied demand (veh/s)
};

struct RunResult {
  RunTrace trace;
  std::vector<double> cycle_time_s;
  MatX greens;  // one row per control cycle (s)
};

// Closed-loop simulation: control at the cycle period, estimation at the
// scenario's estimation period, plant at the tick.  The cycle must be an
// integer multiple of both other periods and the estimation period an
// integer multiple of the tick.
RunResult run(const TrafficNetwork& net, const Scenario& sc);

// Trace CSV: one row per tick and link, doubles printed with %.12g so equal
// runs produce equal bytes.
void save_trace(const RunTrace& trace, const std::string& path);
RunTrace load_trace(const std::string& path);

void save_greens(const std::vector<double>& cycle_time_s, const MatX& greens,
                 const std::string& path);

}  // namespace safctl
