#include "safctl/controller.hpp"

#include "safctl/errors.hpp"
#include "safctl/knapsack.hpp"

namespace safctl {

StateSource variant_state_source(ControlVariant v) {
  switch (v) {
    case ControlVariant::kTucIdeal:
    case ControlVariant::kTucFFIdeal:
      return StateSource::kGroundTruth;
    default:
      return StateSource::kEstimated;
  }
}

DemandSource variant_demand_source(ControlVariant v) {
  switch (v) {
    case ControlVariant::kTuc:
    case ControlVariant::kTucIdeal:
      return DemandSource::kHistoric;
    case ControlVariant::kTucFF:
      return DemandSource::kEstimated;
    default:
      return DemandSource::kGroundTruth;
  }
}

ControlVariant variant_from_string(const std::string& name) {
  if (name == "tuc") return ControlVariant::kTuc;
  if (name == "tuc-ff") return ControlVariant::kTucFF;
  if (name == "tuc-ideal") return ControlVariant::kTucIdeal;
  if (name == "tuc-ff-ideal") return ControlVariant::kTucFFIdeal;
  throw ConfigError("unknown controller \"" + name +
                    "\" (expected tuc, tuc-ff, tuc-ideal, tuc-ff-ideal)");
}

std::string variant_name(ControlVariant v) {
  switch (v) {
    case ControlVariant::kTuc:
      return "tuc";
    case ControlVariant::kTucFF:
      return "tuc-ff";
    case ControlVariant::kTucIdeal:
      return "tuc-ideal";
    default:
      return "tuc-ff-ideal";
  }
}

VecX control_law(const VecX& x_in, const VecX& e_in, const GainSet& gains,
                 const TrafficNetwork& net) {
  if (x_in.size() != net.z_count || e_in.size() != net.z_count) {
    throw ConfigError("dimension mismatch: control inputs");
  }
  VecX x_sat = x_in.cwiseMax(0.0).cwiseMin(net.x_max);
  return -gains.k * x_sat - net.cycle * (gains.ke * e_in);
}

VecX control_cycle(const VecX& x_in, const VecX& e_in, const GainSet& gains,
                   const TrafficNetwork& net) {
  VecX raw = control_law(x_in, e_in, gains, net);
  VecX greens = VecX::Zero(net.s_count);
  for (int j = 0; j < net.j_count; ++j) {
    const auto& stages = net.junction_stages[j];
    const int n = static_cast<int>(stages.size());
    VecX raw_j(n), min_j(n);
    for (int i = 0; i < n; ++i) {
      raw_j(i) = raw(stages[i]);
      min_j(i) = net.g_min(stages[i]);
    }
    VecX proj = project_greens<double>(raw_j, min_j, net.lost_time(j), net.cycle);
    for (int i = 0; i < n; ++i) greens(stages[i]) = proj(i);
  }
  return greens;
}

}  // namespace safctl
