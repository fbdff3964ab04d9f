#pragma once

#include <vector>

#include "safctl/types.hpp"

namespace safctl {

/// Static description of a signalized urban network in store-and-forward form.
///
/// Links are directed road segments, each controlled by the junction it leads
/// into. A stage gives simultaneous right of way to a set of links at one
/// junction; the stages of a junction share its cycle minus lost time.
///
/// Conventions: all indices are 0-based internally (file formats are 1-based),
/// and `turn(z, w)` holds the turning rate from link w into link z, so column
/// w of `turn` describes where link w's outflow goes.
struct TrafficNetwork {
  int z_count = 0;  // links
  int j_count = 0;  // junctions
  int s_count = 0;  // stages

  VecX x_max;      // max vehicles per link (veh)
  VecX sat_flow;   // saturation flow per link (veh/s)
  MatX turn;       // Z x Z turning rates, turn(z, w) = rate w -> z
  VecX exit_rate;  // nominal mid-link exit rate, in [0, 1)
  MatX stage_matrix;  // Z x S right-of-way indicator, entries {0, 1}
  std::vector<std::vector<int>> junction_stages;  // stage indices per junction
  VecX g_min;      // minimum green per stage (s)
  VecX lost_time;  // inter-green total per junction (s)
  double cycle = 0.0;  // control period C (s)

  // Derived store-and-forward matrices; empty until prepared.
  MatX b_u;  // Z x Z
  MatX b_g;  // Z x S

  /// Junction owning stage s, or -1 if unassigned.
  int stage_junction(int s) const;

  /// True when link `from` routes part of its outflow into link `to`.
  bool feeds(int from, int to) const { return turn(to, from) > 0.0; }
};

/// Checks every structural invariant of `raw` and returns it unchanged on
/// success. Derived matrices are not built here.
///
/// Throws ConfigError naming the violated constraint: dimension mismatches,
/// exit rates outside [0,1), a stage in two junctions or in none, a link with
/// no right of way, turning columns summing above one, or a junction whose
/// minimum greens plus lost time exceed the cycle.
TrafficNetwork validate_network(TrafficNetwork raw);

/// B_u = C ((I - diag(t0)) T - I), the per-cycle flow map of the network.
MatX build_bu(const TrafficNetwork& net);

/// B_g = ((I - diag(t0)) T - I) diag(S_1..S_Z) S, the green-time input matrix.
MatX build_bg(const TrafficNetwork& net);

/// validate_network + fills b_u / b_g.
TrafficNetwork prepare_network(TrafficNetwork raw);

/// Average link flows commanded by stage green times: u_z = S_z * sum of
/// greens of stages giving z right of way, divided by the cycle.
VecX flows_from_greens(const VecX& greens, const TrafficNetwork& net);

}  // namespace safctl
