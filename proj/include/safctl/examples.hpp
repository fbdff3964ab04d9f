#pragma once

#include "safctl/network.hpp"
#include "safctl/scenario.hpp"

namespace safctl {

// Two links in series, one single-stage junction each; the smallest network
// with a nontrivial flow matrix.
TrafficNetwork make_chain2();

// Four-junction 2x2 grid: eight origin links (two per junction), eight
// internal links (one per direction between neighbours), two stages per
// junction pairing one origin with one internal approach.
TrafficNetwork make_grid4();

// Sinusoidal demand around the historic means, tapered to zero at the end.
Scenario make_flat_scenario();

// Same, plus a rectangular surge on the two internal links leaving the
// north-west junction for 1.5 hours.
Scenario make_pulse_scenario();

// Minimal scenario for the two-link chain.
Scenario make_chain2_scenario();

}  // namespace safctl
