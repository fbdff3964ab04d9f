#include "safctl/examples.hpp"

namespace safctl {

TrafficNetwork make_chain2() {
  TrafficNetwork net;
  net.z_count = 2;
  net.j_count = 2;
  net.s_count = 2;
  net.cycle = 100.0;
  net.x_max = VecX::Constant(2, 100.0);
  net.sat_flow = VecX::Constant(2, 0.5);
  net.exit_rate = VecX::Zero(2);
  net.exit_rate(0) = 0.2;
  net.turn = MatX::Zero(2, 2);
  net.turn(1, 0) = 1.0;  // all of link 1's outflow feeds link 2
  net.stage_matrix = MatX::Identity(2, 2);
  net.junction_stages = {{0}, {1}};
  net.g_min = VecX::Constant(2, 10.0);
  net.lost_time = VecX::Constant(2, 10.0);
  return prepare_network(std::move(net));
}

TrafficNetwork make_grid4() {
  const int z = 16;
  TrafficNetwork net;
  net.z_count = z;
  net.j_count = 4;
  net.s_count = 8;
  net.cycle = 100.0;
  net.x_max = VecX::Constant(z, 60.0);
  net.x_max.head(8).setConstant(40.0);
  net.sat_flow = VecX::Constant(z, 0.5);
  net.exit_rate = VecX::Constant(z, 0.05);
  net.exit_rate.head(8).setConstant(0.1);

  // Internal links (1-based ids): 9 J1>J2, 10 J2>J1, 11 J1>J3, 12 J3>J1,
  // 13 J2>J4, 14 J4>J2, 15 J3>J4, 16 J4>J3.  Outgoing pair per junction:
  // J1 {9,11}, J2 {10,13}, J3 {12,15}, J4 {14,16}.
  net.turn = MatX::Zero(z, z);
  auto send = [&](int from, int to, double rate) { net.turn(to - 1, from - 1) = rate; };
  const int out[4][2] = {{9, 11}, {10, 13}, {12, 15}, {14, 16}};
  for (int j = 0; j < 4; ++j) {
    const int a = 2 * j + 1, b = 2 * j + 2;  // origin approaches of junction j
    send(a, out[j][0], 0.6);
    send(a, out[j][1], 0.25);
    send(b, out[j][1], 0.6);
    send(b, out[j][0], 0.25);
  }
  // Arriving internal links turn onto the other axis, never straight back.
  send(10, 11, 0.3);
  send(12, 9, 0.3);
  send(9, 13, 0.3);
  send(14, 10, 0.3);
  send(11, 15, 0.3);
  send(16, 12, 0.3);
  send(13, 16, 0.3);
  send(15, 14, 0.3);

  // Stage s of junction j pairs one origin approach with the internal
  // approach arriving on the same axis.
  net.stage_matrix = MatX::Zero(z, 8);
  auto stage = [&](int s, int link_a, int link_b) {
    net.stage_matrix(link_a - 1, s - 1) = 1.0;
    net.stage_matrix(link_b - 1, s - 1) = 1.0;
  };
  stage(1, 1, 10);
  stage(2, 2, 12);
  stage(3, 3, 9);
  stage(4, 4, 14);
  stage(5, 5, 11);
  stage(6, 6, 16);
  stage(7, 7, 13);
  stage(8, 8, 15);
  net.junction_stages = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  net.g_min = VecX::Constant(8, 10.0);
  net.lost_time = VecX::Constant(4, 10.0);
  return prepare_network(std::move(net));
}

Scenario make_flat_scenario() {
  Scenario sc;
  sc.demand.mode = "synthetic";
  sc.demand.e_hist = {{{1, 2, 3, 4, 5, 6, 7, 8}, 0.12}, {{9, 10, 11, 12, 13, 14, 15, 16}, 0.02}};
  sc.demand.taper_s = 1800.0;
  // Estimating once per tick keeps the filter's outflow model aligned with
  // the plant's starvation behaviour on lightly loaded links.
  sc.estimator.period_s = 5.0;
  sc.horizon_s = 28800.0;
  sc.seeds.demand = 12345;
  sc.seeds.sensor = 67890;
  return sc;
}

Scenario make_pulse_scenario() {
  Scenario sc = make_flat_scenario();
  Pulse surge;
  surge.links = {9, 11};
  surge.add = 0.10;
  surge.start_s = 1800.0;
  surge.end_s = 7200.0;
  surge.shape = "rect";
  sc.demand.pulses.push_back(surge);
  return sc;
}

Scenario make_chain2_scenario() {
  Scenario sc;
  sc.demand.mode = "synthetic";
  sc.demand.e_hist = {{{1}, 0.1}, {{2}, 0.05}};
  sc.demand.taper_s = 600.0;
  sc.horizon_s = 3600.0;
  sc.seeds.demand = 11;
  sc.seeds.sensor = 12;
  return sc;
}

}  // namespace safctl
