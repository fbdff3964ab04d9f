#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <safctl/errors.hpp>
#include <safctl/metrics.hpp>
#include <safctl/noise.hpp>
#include <safctl/run.hpp>

#include <cmath>
#include <cstdio>
#include <string>

using namespace safctl;

namespace {

RunTrace make_trace(const MatX& x, const MatX& x_b, double tick) {
  RunTrace t;
  t.tick_s = tick;
  const long ticks = x.rows();
  const long links = x.cols();
  for (long k = 0; k < ticks; ++k) t.time_s.push_back(tick * k);
  t.x = x;
  t.x_b = x_b;
  t.y = MatX::Zero(ticks, links);
  t.x_hat = MatX::Zero(ticks, links);
  t.e_hat = MatX::Zero(ticks, links);
  t.e_true = MatX::Zero(ticks, links);
  return t;
}

}  // namespace

TEST_CASE("time spent counts waiting and blocked vehicles per tick") {
  MatX x = MatX::Constant(2, 1, 1.0);  // one vehicle for two 5 s ticks
  RunTrace t = make_trace(x, MatX::Zero(2, 1), 5.0);
  CHECK(tts(t) == doctest::Approx(10.0 / 3600.0).epsilon(1e-12));

  // Blocked vehicles count toward total time as well.
  t.x_b(0, 0) = 1.0;
  CHECK(tts(t) == doctest::Approx(15.0 / 3600.0).epsilon(1e-12));
  CHECK(ttb(t) == doctest::Approx(5.0 / 3600.0).epsilon(1e-12));
}

TEST_CASE("queue balance weights squared occupancies by capacity") {
  MatX x = MatX::Constant(1, 1, 10.0);
  RunTrace t = make_trace(x, MatX::Zero(1, 1), 5.0);
  VecX x_max = VecX::Constant(1, 100.0);
  CHECK(rqb(t, x_max) == doctest::Approx(1.0).epsilon(1e-12));

  // Quadratic: doubling the queue quadruples the balance term.
  t.x *= 2.0;
  CHECK(rqb(t, x_max) == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(rqb(t, VecX::Ones(2)), ConfigError);
}

TEST_CASE("total time splits into waiting and blocked parts") {
  UniformStream rng(2024u);
  MatX x(40, 3), x_b(40, 3);
  for (long k = 0; k < 40; ++k) {
    for (int z = 0; z < 3; ++z) {
      x(k, z) = rng.range(0.0, 60.0);
      x_b(k, z) = rng.range(0.0, 5.0);
    }
  }
  RunTrace t = make_trace(x, x_b, 5.0);
  const double waiting = t.tick_s * x.sum() / 3600.0;
  CHECK(tts(t) == doctest::Approx(ttb(t) + waiting).epsilon(1e-12));
}

TEST_CASE("report gathers totals and survives a file round trip") {
  MatX x(3, 2), x_b(3, 2);
  x << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  x_b << 0.0, 0.5, 0.0, 0.0, 1.5, 0.0;
  RunTrace t = make_trace(x, x_b, 5.0);
  VecX x_max = VecX::Constant(2, 50.0);

  MetricsReport rep = build_report(t, x_max, "tuc-ff");
  CHECK(rep.controller == "tuc-ff");
  CHECK(rep.tick_s == 5.0);
  CHECK(rep.horizon_s == 15.0);
  REQUIRE(rep.x_total.size() == 3);
  CHECK(rep.x_total[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rep.x_total[2] == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(rep.x_b_total[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.tts_veh_h == doctest::Approx(tts(t)).epsilon(1e-12));

  const std::string path = "/tmp/safctl_metrics_test.json";
  save_report(rep, path);
  MetricsReport back = load_report(path);
  std::remove(path.c_str());
  CHECK(back.controller == rep.controller);
  CHECK(back.tts_veh_h == rep.tts_veh_h);
  CHECK(back.rqb_veh == rep.rqb_veh);
  CHECK(back.ttb_veh_h == rep.ttb_veh_h);
  CHECK(back.x_total == rep.x_total);
  CHECK(back.time_s == rep.time_s);
}

TEST_CASE("malformed report files are rejected") {
  MatX x = MatX::Zero(1, 1);
  RunTrace t = make_trace(x, x, 5.0);
  MetricsReport rep = build_report(t, VecX::Ones(1), "tuc");
  nlohmann::json doc = report_to_json(rep);
  doc["bonus"] = 1;
  CHECK_THROWS_WITH_AS(report_from_json(doc), doctest::Contains("bonus"),
                       ConfigError);
  nlohmann::json doc2 = report_to_json(rep);
  doc2.erase("tts_veh_h");
  CHECK_THROWS_AS(report_from_json(doc2), ConfigError);

  CHECK_THROWS_WITH_AS(load_report("/tmp/safctl_absent_report.json"),
                       doctest::Contains("cannot open metrics file"), ConfigError);
}

TEST_CASE("empty trace yields zero cost") {
  RunTrace t = make_trace(MatX::Zero(0, 2), MatX::Zero(0, 2), 5.0);
  CHECK(tts(t) == 0.0);
  CHECK(ttb(t) == 0.0);
  CHECK(rqb(t, VecX::Ones(2)) == 0.0);
}
