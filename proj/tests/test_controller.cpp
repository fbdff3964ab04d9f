#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <safctl/controller.hpp>
#include <safctl/errors.hpp>
#include <safctl/examples.hpp>
#include <safctl/gains.hpp>
#include <safctl/knapsack.hpp>
#include <safctl/noise.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace safctl;

namespace {

VecX vec2(double a, double b) {
  VecX v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("variant source mapping") {
  CHECK(variant_state_source(ControlVariant::kTuc) == StateSource::kEstimated);
  CHECK(variant_state_source(ControlVariant::kTucFF) == StateSource::kEstimated);
  CHECK(variant_state_source(ControlVariant::kTucIdeal) ==
        StateSource::kGroundTruth);
  CHECK(variant_state_source(ControlVariant::kTucFFIdeal) ==
        StateSource::kGroundTruth);

  CHECK(variant_demand_source(ControlVariant::kTuc) == DemandSource::kHistoric);
  CHECK(variant_demand_source(ControlVariant::kTucIdeal) ==
        DemandSource::kHistoric);
  CHECK(variant_demand_source(ControlVariant::kTucFF) ==
        DemandSource::kEstimated);
  CHECK(variant_demand_source(ControlVariant::kTucFFIdeal) ==
        DemandSource::kGroundTruth);
}

TEST_CASE("variant names round trip") {
  for (auto v : {ControlVariant::kTuc, ControlVariant::kTucFF,
                 ControlVariant::kTucIdeal, ControlVariant::kTucFFIdeal}) {
    CHECK(variant_from_string(variant_name(v)) == v);
  }
  CHECK_THROWS_WITH_AS(variant_from_string("lqr"),
                       doctest::Contains("unknown controller"), ConfigError);
}

TEST_CASE("raw law combines feedback and scaled feedforward") {
  TrafficNetwork net = make_chain2();
  GainSet gains;
  gains.k = MatX::Zero(2, 2);
  gains.ke = MatX::Zero(2, 2);
  gains.k(0, 0) = 0.618;
  gains.ke(0, 0) = 1.0;

  VecX g = control_law(vec2(10.0, 0.0), vec2(0.01, 0.0), gains, net);
  CHECK(g(0) == doctest::Approx(-0.618 * 10.0 - 100.0 * 0.01).epsilon(1e-12));
  CHECK(g(1) == 0.0);

  // Occupancies saturate into [0, x_max] before entering the law.
  VecX over = control_law(vec2(150.0, 0.0), VecX::Zero(2), gains, net);
  VecX capped = control_law(vec2(100.0, 0.0), VecX::Zero(2), gains, net);
  CHECK(over(0) == capped(0));
  VecX under = control_law(vec2(-20.0, 0.0), VecX::Zero(2), gains, net);
  CHECK(under(0) == 0.0);

  CHECK_THROWS_AS(control_law(VecX::Zero(3), VecX::Zero(2), gains, net),
                  ConfigError);
}

TEST_CASE("projection worked examples") {
  VecX g_min = vec2(10.0, 10.0);

  // Already feasible: untouched.
  VecX kept = project_greens<double>(vec2(45.0, 45.0), g_min, 10.0, 100.0);
  CHECK(kept(0) == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(kept(1) == doctest::Approx(45.0).epsilon(1e-12));

  // Ten seconds over budget: both stages give up five.
  VecX trimmed = project_greens<double>(vec2(50.0, 60.0), g_min, 10.0, 100.0);
  CHECK(trimmed(0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(trimmed(1) == doctest::Approx(50.0).epsilon(1e-12));

  // One stage pinned at its minimum, the other absorbs the rest.
  VecX pinned =
      project_greens<double>(vec2(5.0, 95.0), vec2(20.0, 20.0), 10.0, 100.0);
  CHECK(pinned(0) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(pinned(1) == doctest::Approx(70.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(
      project_greens<double>(vec2(40.0, 40.0), vec2(50.0, 50.0), 10.0, 100.0),
      doctest::Contains("infeasible"), ConfigError);
}

TEST_CASE("projection agrees with exhaustive active-set search") {
  UniformStream rng(555u);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.next() * 4.0);
    const double cycle = 100.0;
    const double lost = rng.range(5.0, 20.0);
    VecX g_min(n), raw(n);
    double min_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      g_min(i) = rng.range(0.0, (cycle - lost) / n);
      min_sum += g_min(i);
    }
    REQUIRE(min_sum <= cycle - lost);
    for (int i = 0; i < n; ++i) raw(i) = rng.range(-80.0, 160.0);

    VecX fast = project_greens<double>(raw, g_min, lost, cycle);
    VecX slow = oracle::enumerate_projection(raw, g_min, cycle - lost);
    CHECK((fast - slow).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(std::abs(fast.sum() - (cycle - lost)) < 1e-9);
    CHECK((fast - g_min).minCoeff() >= -1e-12);
  }
}

TEST_CASE("projection is idempotent and nonexpansive") {
  UniformStream rng(777u);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() * 3.0);
    VecX g_min = VecX::Constant(n, 5.0);
    VecX a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = rng.range(-50.0, 150.0);
      b(i) = rng.range(-50.0, 150.0);
    }
    VecX pa = project_greens<double>(a, g_min, 10.0, 100.0);
    VecX pb = project_greens<double>(b, g_min, 10.0, 100.0);
    CHECK((project_greens<double>(pa, g_min, 10.0, 100.0) - pa)
              .lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("projection ignores a uniform shift of the raw greens") {
  // The equal-sum constraint absorbs any common offset of the raw greens;
  // only rounding from the interior divisions separates the two paths.
  UniformStream rng(888u);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() * 3.0);
    VecX g_min(n), raw(n);
    for (int i = 0; i < n; ++i) {
      g_min(i) = static_cast<double>(static_cast<int>(rng.next() * 15.0));
      raw(i) = static_cast<double>(static_cast<int>(rng.next() * 200.0) - 60);
    }
    const double shift = static_cast<double>(static_cast<int>(rng.next() * 90.0) - 40);
    VecX base = project_greens<double>(raw, g_min, 10.0, 100.0);
    VecX shifted = project_greens<double>(
        (raw.array() + shift).matrix(), g_min, 10.0, 100.0);
    CHECK((base - shifted).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("full control cycle meets the junction constraints") {
  TrafficNetwork net = make_grid4();
  GainSet gains = build_gain_set(net, 1e-4);
  UniformStream rng(999u);
  for (int trial = 0; trial < 50; ++trial) {
    VecX x(net.z_count), e(net.z_count);
    for (int z = 0; z < net.z_count; ++z) {
      x(z) = rng.range(0.0, net.x_max(z));
      e(z) = rng.range(0.0, 0.4);
    }
    VecX g = control_cycle(x, e, gains, net);
    for (int j = 0; j < net.j_count; ++j) {
      double sum = 0.0;
      for (int s : net.junction_stages[j]) {
        sum += g(s);
        CHECK(g(s) >= net.g_min(s) - 1e-12);
      }
      CHECK(std::abs(sum + net.lost_time(j) - net.cycle) < 1e-9);
    }
  }
}

TEST_CASE("zero gains command the projected origin") {
  TrafficNetwork net = make_chain2();
  GainSet gains;
  gains.k = MatX::Zero(2, 2);
  gains.ke = MatX::Zero(2, 2);
  VecX g = control_cycle(VecX::Zero(2), VecX::Zero(2), gains, net);
  // Each junction projects 0 onto {g >= 10, g = 90}: the single stage takes
  // the whole budget.
  CHECK(g(0) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(g(1) == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("fuller links and stronger demand ask for more green") {
  // Single link, single stage: green drains the link (input coefficient
  // -0.5), so both gains must point green *up* when vehicles accumulate.
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
  net = prepare_network(net);
  GainSet gains = build_gain_set(net, 1e-4);

  // Demand gain is exactly the inverse input coefficient.
  CHECK(gains.ke(0, 0) == doctest::Approx(-2.0).epsilon(1e-7));

  VecX low = control_law(VecX::Constant(1, 10.0), VecX::Zero(1), gains, net);
  VecX high = control_law(VecX::Constant(1, 60.0), VecX::Zero(1), gains, net);
  CHECK(high(0) > low(0));

  VecX calm = control_law(VecX::Zero(1), VecX::Zero(1), gains, net);
  VecX busy = control_law(VecX::Zero(1), VecX::Constant(1, 0.1), gains, net);
  CHECK(busy(0) > calm(0));
  CHECK(busy(0) == doctest::Approx(20.0).epsilon(1e-6));
}
