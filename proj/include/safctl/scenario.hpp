#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "safctl/controller.hpp"
#include "safctl/noise.hpp"
#include "safctl/simulator.hpp"
#include "safctl/types.hpp"

namespace safctl {

// A value applied to a group of links (1-based ids).
struct LinkGroup {
  std::vector<int> links;
  double value = 0.0;
};

// Extra demand on a group of links over a time window, either rectangular or
// a raised-cosine bump peaking at the window midpoint.
struct Pulse {
  std::vector<int> links;
  double add = 0.0;  // veh/s at peak
  double start_s = 0.0;
  double end_s = 0.0;
  std::string shape = "rect";  // "rect" | "cosine"
};

struct DemandSpec {
  std::string mode = "synthetic";  // "synthetic" | "profile"
  std::vector<LinkGroup> e_hist;   // historic demand (veh/s)
  // synthetic: e = e_hist + A sin(2 pi t / T + phase), with per-link draws
  // A/e_hist ~ U[amplitude range], T ~ U[period range] hours, phase ~ U[0,2pi).
  double amplitude_lo = 0.25;
  double amplitude_hi = 0.5;
  double period_lo_h = 0.5;
  double period_hi_h = 2.0;
  // profile: e = e_hist * scale(t) * (1 + delta(t)) with scale interpolated
  // between knots and delta piecewise linear with random knots in
  // [-delta_max, delta_max] every delta_knot_s seconds.
  std::vector<double> profile_t_s;
  std::vector<double> profile_scale;
  double delta_max = 0.0;
  double delta_knot_s = 1800.0;

  std::vector<Pulse> pulses;
  double taper_s = 0.0;  // linear fade of the whole signal ending at horizon
};

struct EstimatorSpec {
  double period_s = 20.0;
  // Empty groups mean the per-link rules Qx=(S_z E/10)^2, Qe=(S_z E/1000)^2,
  // R=(0.05 x_max/4)^2.
  std::vector<LinkGroup> qx;
  std::vector<LinkGroup> qe;
  std::vector<LinkGroup> r;
};

struct ControllerSpec {
  ControlVariant variant = ControlVariant::kTucFF;
  double r_weight = 1e-4;
  double tick_s = 5.0;
  double c_ug = 0.85;
  BlockingGate gate = BlockingGate::kDownstream;
};

struct Seeds {
  std::uint64_t demand = 0;
  std::uint64_t sensor = 0;
};

struct Scenario {
  DemandSpec demand;
  SensorConfig sensor;  // seed filled from seeds.sensor at run time
  EstimatorSpec estimator;
  ControllerSpec controller;
  double horizon_s = 0.0;
  Seeds seeds;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& sc);
std::string scenario_to_string(const Scenario& sc);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

// Expands a link-group list to a dense per-link vector; ungrouped links get
// `fill`.  Group ids must be valid and must not overlap.
VecX expand_groups(const std::vector<LinkGroup>& groups, int z_count, double fill,
                   const std::string& what);
VecX expand_groups(const std::vector<LinkGroup>& groups, int z_count, const VecX& fill,
                   const std::string& what);

// Demand realized on the simulation grid: row k holds e(k * tick_s).
struct DemandProfile {
  MatX e;  // ticks x links (veh/s)
  VecX e_hist;
  double tick_s = 0.0;
  double horizon_s = 0.0;
};

DemandProfile build_demand(const DemandSpec& spec, int z_count, double tick_s,
                           double horizon_s, std::uint64_t seed);

}  // namespace safctl
