#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <safctl/errors.hpp>
#include <safctl/examples.hpp>
#include <safctl/noise.hpp>
#include <safctl/simulator.hpp>

#include <cmath>
#include <vector>

using namespace safctl;

namespace {

TrafficNetwork single_link() {
  TrafficNetwork net;
  net.z_count = 1;
  net.j_count = 1;
  net.s_count = 1;
  net.x_max = VecX::Constant(1, 100.0);
  net.sat_flow = VecX::Constant(1, 0.5);
  net.exit_rate = VecX::Zero(1);
  net.turn = MatX::Zero(1, 1);
  net.stage_matrix = MatX::Ones(1, 1);
  net.junction_stages = {{0}};
  net.g_min = VecX::Constant(1, 10.0);
  net.lost_time = VecX::Constant(1, 10.0);
  net.cycle = 100.0;
  return prepare_network(net);
}

}  // namespace

TEST_CASE("outflow saturates at the commanded flow or the stored vehicles") {
  TrafficNetwork net = make_chain2();
  VecX cmd(2);
  cmd << 0.4, 0.2;

  VecX x(2);
  x << 10.0, 50.0;
  VecX u = nonlinear_outflow(x, cmd, net, 0.85, 5.0);
  CHECK(u(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(u(1) == doctest::Approx(0.2).epsilon(1e-12));

  x << 1.0, 50.0;  // only 1 vehicle: at most x/T can leave
  u = nonlinear_outflow(x, cmd, net, 0.85, 5.0);
  CHECK(u(0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("congested receiver stops the sender") {
  TrafficNetwork net = make_chain2();
  VecX cmd(2);
  cmd << 0.4, 0.2;
  VecX x(2);

  x << 10.0, 90.0;  // above 0.85 * 100
  VecX u = nonlinear_outflow(x, cmd, net, 0.85, 5.0);
  CHECK(u(0) == 0.0);
  CHECK(u(1) == doctest::Approx(0.2).epsilon(1e-12));

  x << 10.0, 85.0;  // exactly at the threshold: not congested yet
  u = nonlinear_outflow(x, cmd, net, 0.85, 5.0);
  CHECK(u(0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("gate direction switches which neighbour is inspected") {
  TrafficNetwork net = make_chain2();
  VecX cmd(2);
  cmd << 0.4, 0.2;
  VecX x(2);
  x << 10.0, 90.0;

  // Physical reading: the full receiver stops its feeder.
  VecX down = nonlinear_outflow(x, cmd, net, 0.85, 5.0, BlockingGate::kDownstream);
  CHECK(down(0) == 0.0);

  // Alternate reading: nothing feeds link 1, so it keeps flowing; link 2 is
  // fed by the uncongested link 1 and flows too.
  VecX up = nonlinear_outflow(x, cmd, net, 0.85, 5.0, BlockingGate::kUpstream);
  CHECK(up(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(up(1) == doctest::Approx(0.2).epsilon(1e-12));

  x << 90.0, 10.0;  // now the congested feeder stops its receiver
  up = nonlinear_outflow(x, cmd, net, 0.85, 5.0, BlockingGate::kUpstream);
  CHECK(up(1) == 0.0);
}

TEST_CASE("one tick moves vehicles along the chain") {
  TrafficNetwork net = make_chain2();
  SimState s = SimState::zero(2);
  s.x << 10.0, 50.0;
  VecX cmd(2);
  cmd << 0.4, 0.2;
  SimState next = step(s, cmd, VecX::Zero(2), net, 0.85, 5.0);
  CHECK(next.x(0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(next.x(1) == doctest::Approx(51.0).epsilon(1e-12));
  CHECK(next.x_b(0) == 0.0);
  CHECK(next.x_b(1) == 0.0);
  CHECK(next.k == 1);
}

TEST_CASE("demand overflowing a full link joins the blocked backlog") {
  TrafficNetwork net = single_link();
  SimState s = SimState::zero(1);
  s.x(0) = 99.0;
  SimState next =
      step(s, VecX::Zero(1), VecX::Constant(1, 1.0), net, 0.85, 5.0);
  CHECK(next.x(0) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(next.x_b(0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("freed space drains the backlog before new demand") {
  TrafficNetwork net = single_link();
  SimState s = SimState::zero(1);
  s.x(0) = 50.0;
  s.x_b(0) = 3.0;
  SimState next = step(s, VecX::Zero(1), VecX::Zero(1), net, 0.85, 5.0);
  CHECK(next.x(0) == doctest::Approx(53.0).epsilon(1e-12));
  CHECK(next.x_b(0) == 0.0);
}

TEST_CASE("random driving keeps invariants and conserves vehicles") {
  TrafficNetwork net = make_grid4();
  const double tick = 5.0;
  UniformStream rng(424242u);
  SimState s = SimState::zero(net.z_count);
  for (int k = 0; k < 2000; ++k) {
    VecX cmd(net.z_count), e(net.z_count);
    for (int z = 0; z < net.z_count; ++z) {
      cmd(z) = rng.range(0.0, 0.5);
      e(z) = rng.range(0.0, 0.3);
    }
    VecX u_nl = nonlinear_outflow(s.x, cmd, net, 0.85, tick);
    SimState next = step(s, cmd, e, net, 0.85, tick);

    for (int z = 0; z < net.z_count; ++z) {
      CHECK(next.x(z) >= -1e-9);
      CHECK(next.x(z) <= net.x_max(z) + 1e-9);
      CHECK(next.x_b(z) >= -1e-9);
    }

    // Vehicles only enter via demand and leave via realized outflow.
    const double before = s.x.sum() + s.x_b.sum();
    const double after = next.x.sum() + next.x_b.sum();
    const double expected_delta =
        tick * e.sum() + (tick / net.cycle) * (net.b_u * u_nl).sum();
    CHECK(std::abs((after - before) - expected_delta) < 1e-9);

    s = next;
  }
}

TEST_CASE("noise-free sensor reads the state exactly") {
  SensorConfig cfg;
  cfg.white_coef = 0.0;
  cfg.colored_coef = 0.0;
  cfg.seed = 7u;
  SensorBank bank(2, 100.0, 20.0, cfg);
  VecX x(2);
  x << 42.0, 0.0;
  VecX y = bank.measure(x);
  CHECK(y(0) == 42.0);
  CHECK(y(1) == 0.0);
}

TEST_CASE("sensor noise is multiplicative with the configured variance") {
  SensorConfig cfg;
  cfg.seed = 99u;
  SensorBank bank(1, 100.0, 20.0, cfg);
  VecX x = VecX::Constant(1, 100.0);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rel = bank.measure(x)(0) / 100.0 - 1.0;
    sum += rel;
    sum_sq += rel * rel;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // Independent white and band-limited parts add in variance.
  const double expected = 0.05 * 0.05 + 0.4 * 0.4;
  CHECK(std::abs(mean) < 5e-3);
  CHECK(var == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("sensor streams are deterministic and per-link independent") {
  SensorConfig cfg;
  cfg.seed = 5u;
  SensorBank a(2, 100.0, 20.0, cfg);
  SensorBank b(2, 100.0, 20.0, cfg);
  VecX x = VecX::Constant(2, 50.0);
  for (int i = 0; i < 10; ++i) {
    VecX ya = a.measure(x);
    VecX yb = b.measure(x);
    CHECK(ya(0) == yb(0));
    CHECK(ya(1) == yb(1));
    CHECK(ya(0) != ya(1));  // distinct per-link streams
  }
}

TEST_CASE("band-pass stationary variance matches simulation") {
  Biquad bq = bandpass_biquad(0.01, 0.02, 0.05);
  const double predicted = stationary_std(bq);
  GaussianStream g(1234u);
  const int n = 1000000;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = bq.step(g.next());
    sum_sq += y * y;
  }
  const double sampled = std::sqrt(sum_sq / n);
  CHECK(sampled == doctest::Approx(predicted).epsilon(0.02));
}

TEST_CASE("negative state raises instead of clamping") {
  TrafficNetwork net = single_link();
  SimState s = SimState::zero(1);
  s.x(0) = 1.0;
  // Commanded outflow exceeding x/T is trimmed, so this stays legal; driving
  // with negative demand is the only way to break the lower bound.
  CHECK_THROWS_AS(step(s, VecX::Zero(1), VecX::Constant(1, -1.0), net, 0.85, 5.0),
                  ModelError);
}
