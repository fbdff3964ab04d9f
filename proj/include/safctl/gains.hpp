#pragma once

#include <string>

#include <json.hpp>

#include "safctl/network.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Everything the control law needs for one network, fixed after synthesis.
// The first `rank` columns of w span the column space of b_g; gains are
// computed there and lifted to full state dimension with K = K1 [I 0] w_inv.
struct GainSet {
  MatX w;       // Z x Z orthonormal basis, reachable columns first
  MatX w_inv;   // inverse of w (its transpose)
  MatX bg1;     // S x S reachable-block input matrix, invertible
  MatX q1;      // S x S state weight in reachable coordinates
  MatX r;       // S x S input weight
  MatX p;       // S x S Riccati solution
  MatX k1;      // S x S feedback gain, reachable coordinates
  MatX ke1;     // S x S feedforward gain, reachable coordinates
  MatX k;       // S x Z feedback gain on link occupancies
  MatX ke;      // S x Z feedforward gain on link demands
  double dare_residual = 0.0;
};

// Synthesises the full gain set.  Requires rank(b_g) equal to the stage
// count; store-and-forward networks where every link gets right of way in
// some stage satisfy this.
GainSet build_gain_set(const TrafficNetwork& net, const MatX& r);
GainSet build_gain_set(const TrafficNetwork& net, double r_diag = 1e-4);

nlohmann::ordered_json gains_to_json(const GainSet& gains);
void save_gains(const GainSet& gains, const std::string& path);

}  // namespace safctl
