#include "safctl/run.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "safctl/controller.hpp"
#include "safctl/errors.hpp"
#include "safctl/noise.hpp"

namespace safctl {

namespace {

long exact_ratio(double whole, double part, const char* what) {
  const long n = static_cast<long>(std::llround(whole / part));
  if (n < 1 || std::abs(static_cast<double>(n) * part - whole) > 1e-9) {
    throw ConfigError(std::string(what) + " must divide evenly (got " +
                      std::to_string(whole) + " / " + std::to_string(part) + ")");
  }
  return n;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

RunResult run(const TrafficNetwork& net, const Scenario& sc) {
  const double tick = sc.controller.tick_s;
  const double est_period = sc.estimator.period_s;
  const long ticks_per_est = exact_ratio(est_period, tick, "estimation period / tick");
  const long est_per_cycle = exact_ratio(net.cycle, est_period, "cycle / estimation period");
  exact_ratio(net.cycle, tick, "cycle / tick");
  const long ticks_per_cycle = ticks_per_est * est_per_cycle;
  const long ticks = exact_ratio(sc.horizon_s, tick, "horizon / tick");

  const DemandProfile demand =
      build_demand(sc.demand, net.z_count, tick, sc.horizon_s, sc.seeds.demand);
  const GainSet gains = build_gain_set(net, sc.controller.r_weight);

  const ControlVariant variant = sc.controller.variant;
  const EstimatorMode mode = variant_demand_source(variant) == DemandSource::kHistoric
                                 ? EstimatorMode::kOccupancyOnly
                                 : EstimatorMode::kJoint;
  EstimatorBank bank = make_estimator_bank(
      net, est_period, mode,
      expand_groups(sc.estimator.qx, net.z_count, default_qx(net, est_period), "estimator qx"),
      expand_groups(sc.estimator.qe, net.z_count, default_qe(net, est_period), "estimator qe"),
      expand_groups(sc.estimator.r, net.z_count, default_r(net), "estimator r"),
      demand.e_hist);

  SensorConfig sensor_cfg = sc.sensor;
  sensor_cfg.seed = sc.seeds.sensor;
  SensorBank sensors(net.z_count, net.cycle, est_period, sensor_cfg);

  const long cycles = ticks / ticks_per_cycle + (ticks % ticks_per_cycle ? 1 : 0);
  RunResult out;
  out.trace.tick_s = tick;
  out.trace.time_s.resize(ticks);
  out.trace.x = MatX::Zero(ticks, net.z_count);
  out.trace.x_b = MatX::Zero(ticks, net.z_count);
  out.trace.y = MatX::Zero(ticks, net.z_count);
  out.trace.x_hat = MatX::Zero(ticks, net.z_count);
  out.trace.e_hat = MatX::Zero(ticks, net.z_count);
  out.trace.e_true = MatX::Zero(ticks, net.z_count);
  out.greens = MatX::Zero(cycles, net.s_count);
  out.cycle_time_s.resize(cycles);

  SimState state = SimState::zero(net.z_count);
  VecX greens = VecX::Zero(net.s_count);
  VecX u_cmd = VecX::Zero(net.z_count);
  VecX y_held = VecX::Zero(net.z_count);
  VecX x_hat_held = VecX::Zero(net.z_count);
  VecX e_hat_held = bank.e_hist;
  long cycle_index = 0;

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * tick;
    const VecX e_now = demand.e.row(k).transpose();

    if (k % ticks_per_est == 0) {
      // Measure and filter first; a control decision due this tick consumes
      // the freshly filtered estimates.
      y_held = sensors.measure(state.x);
      update(bank, y_held);
      x_hat_held = bank.x_hat;
      e_hat_held = bank.e_hat;

      if (k % ticks_per_cycle == 0) {
        const VecX& x_in = variant_state_source(variant) == StateSource::kGroundTruth
                               ? state.x
                               : bank.x_hat;
        VecX e_in;
        switch (variant_demand_source(variant)) {
          case DemandSource::kGroundTruth:
            e_in = e_now;
            break;
          case DemandSource::kEstimated:
            e_in = bank.e_hat;
            break;
          case DemandSource::kHistoric:
            e_in = bank.e_hist;
            break;
        }
        greens = control_cycle(x_in, e_in, gains, net);
        u_cmd = flows_from_greens(greens, net);
        out.cycle_time_s[cycle_index] = t;
        out.greens.row(cycle_index) = greens.transpose();
        ++cycle_index;
      }

      const VecX u_est = estimated_outflow(bank.x_hat, greens, net, est_period,
                                           sc.controller.c_ug, sc.controller.gate);
      predict(bank, u_est, net);
    }

    out.trace.time_s[k] = t;
    out.trace.x.row(k) = state.x.transpose();
    out.trace.x_b.row(k) = state.x_b.transpose();
    out.trace.y.row(k) = y_held.transpose();
    out.trace.x_hat.row(k) = x_hat_held.transpose();
    out.trace.e_hat.row(k) = e_hat_held.transpose();
    out.trace.e_true.row(k) = e_now.transpose();

    state = step(state, u_cmd, e_now, net, sc.controller.c_ug, tick, sc.controller.gate);
  }

  out.greens.conservativeResize(cycle_index, net.s_count);
  out.cycle_time_s.resize(cycle_index);
  return out;
}

void save_trace(const RunTrace& trace, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw ConfigError("cannot write trace file: " + path);
  outf << "time_s,link,x,x_b,y,x_hat,e_hat,e_true\n";
  const long ticks = static_cast<long>(trace.time_s.size());
  for (long k = 0; k < ticks; ++k) {
    for (int z = 0; z < trace.x.cols(); ++z) {
      outf << fmt(trace.time_s[k]) << ',' << z + 1 << ',' << fmt(trace.x(k, z)) << ','
           << fmt(trace.x_b(k, z)) << ',' << fmt(trace.y(k, z)) << ','
           << fmt(trace.x_hat(k, z)) << ',' << fmt(trace.e_hat(k, z)) << ','
           << fmt(trace.e_true(k, z)) << '\n';
    }
  }
}

RunTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "time_s,link,x,x_b,y,x_hat,e_hat,e_true") {
    throw ConfigError("trace file " + path + ": unexpected header");
  }

  std::vector<std::array<double, 8>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 8> row{};
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= 8) throw ConfigError("trace file " + path + ": too many columns");
      try {
        row[col] = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError("trace file " + path + ": bad number \"" + cell + "\"");
      }
      ++col;
    }
    if (col != 8) throw ConfigError("trace file " + path + ": expected 8 columns");
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("trace file " + path + ": no data rows");

  int links = 0;
  for (const auto& row : rows) {
    links = std::max(links, static_cast<int>(std::llround(row[1])));
  }
  if (links < 1) throw ConfigError("trace file " + path + ": bad link ids");
  if (rows.size() % links != 0) {
    throw ConfigError("trace file " + path + ": link blocks are ragged");
  }
  const long ticks = static_cast<long>(rows.size()) / links;

  RunTrace trace;
  trace.time_s.resize(ticks);
  trace.x = MatX::Zero(ticks, links);
  trace.x_b = MatX::Zero(ticks, links);
  trace.y = MatX::Zero(ticks, links);
  trace.x_hat = MatX::Zero(ticks, links);
  trace.e_hat = MatX::Zero(ticks, links);
  trace.e_true = MatX::Zero(ticks, links);
  for (long k = 0; k < ticks; ++k) {
    trace.time_s[k] = rows[k * links][0];
    for (int z = 0; z < links; ++z) {
      const auto& row = rows[k * links + z];
      if (static_cast<int>(std::llround(row[1])) != z + 1) {
        throw ConfigError("trace file " + path + ": link ids out of order");
      }
      trace.x(k, z) = row[2];
      trace.x_b(k, z) = row[3];
      trace.y(k, z) = row[4];
      trace.x_hat(k, z) = row[5];
      trace.e_hat(k, z) = row[6];
      trace.e_true(k, z) = row[7];
    }
  }
  if (ticks >= 2) trace.tick_s = trace.time_s[1] - trace.time_s[0];
  return trace;
}

void save_greens(const std::vector<double>& cycle_time_s, const MatX& greens,
                 const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw ConfigError("cannot write greens file: " + path);
  outf << "time_s,stage,green_s\n";
  for (long c = 0; c < greens.rows(); ++c) {
    for (int s = 0; s < greens.cols(); ++s) {
      outf << fmt(cycle_time_s[c]) << ',' << s + 1 << ',' << fmt(greens(c, s)) << '\n';
    }
  }
}

}  // namespace safctl
