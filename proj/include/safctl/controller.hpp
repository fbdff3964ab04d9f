#pragma once

#include <string>

#include "safctl/gains.hpp"
#include "safctl/network.hpp"
#include "safctl/types.hpp"

namespace safctl {

// The four control variants: feedback source is either measured truth or the
// filter estimate, demand source is truth, estimate, or historic constant.
enum class ControlVariant { kTuc, kTucFF, kTucIdeal, kTucFFIdeal };

enum class StateSource { kGroundTruth, kEstimated };
enum class DemandSource { kGroundTruth, kEstimated, kHistoric };

StateSource variant_state_source(ControlVariant v);
DemandSource variant_demand_source(ControlVariant v);

ControlVariant variant_from_string(const std::string& name);
std::string variant_name(ControlVariant v);

// Raw feedback-feedforward law g = -K [x]_0^xmax - C Ke e.  Occupancies are
// saturated into [0, x_max] before use; the result may violate green-time
// constraints and is projected per junction afterwards.
VecX control_law(const VecX& x_in, const VecX& e_in, const GainSet& gains,
                 const TrafficNetwork& net);

// One control decision: law, then per-junction projection onto
// {g >= g_min, sum over junction stages + lost_time = cycle}.
VecX control_cycle(const VecX& x_in, const VecX& e_in, const GainSet& gains,
                   const TrafficNetwork& net);

}  // namespace safctl
