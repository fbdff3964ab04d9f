#include "safctl/network.hpp"

#include <string>

#include "safctl/errors.hpp"

namespace safctl {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

int TrafficNetwork::stage_junction(int s) const {
  for (int j = 0; j < j_count; ++j) {
    for (int owned : junction_stages[j]) {
      if (owned == s) return j;
    }
  }
  return -1;
}

TrafficNetwork validate_network(TrafficNetwork raw) {
  const int z = raw.z_count;
  const int j = raw.j_count;
  const int s = raw.s_count;
  require(z > 0, "network has no links");
  require(j > 0, "network has no junctions");
  require(s > 0, "network has no stages");
  require(raw.cycle > 0.0, "cycle must be positive");

  auto check_len = [&](const VecX& v, int n, const char* name) {
    require(v.size() == n, std::string("dimension mismatch: ") + name);
  };
  check_len(raw.x_max, z, "x_max");
  check_len(raw.sat_flow, z, "sat_flow");
  check_len(raw.exit_rate, z, "exit_rate");
  check_len(raw.g_min, s, "g_min");
  check_len(raw.lost_time, j, "lost_time");
  require(raw.turn.rows() == z && raw.turn.cols() == z, "dimension mismatch: turn matrix");
  require(raw.stage_matrix.rows() == z && raw.stage_matrix.cols() == s,
          "dimension mismatch: stage matrix");
  require(static_cast<int>(raw.junction_stages.size()) == j,
          "dimension mismatch: junction stage sets");

  for (int i = 0; i < z; ++i) {
    require(raw.x_max(i) > 0.0, "x_max must be positive (link " + std::to_string(i + 1) + ")");
    require(raw.sat_flow(i) >= 0.0, "sat_flow must be nonnegative (link " + std::to_string(i + 1) + ")");
    require(raw.exit_rate(i) >= 0.0 && raw.exit_rate(i) < 1.0,
            "exit_rate out of [0,1) (link " + std::to_string(i + 1) + ")");
  }

  for (int col = 0; col < z; ++col) {
    double sum = 0.0;
    for (int row = 0; row < z; ++row) {
      require(raw.turn(row, col) >= 0.0, "negative turning rate");
      sum += raw.turn(row, col);
    }
    require(sum <= 1.0 + 1e-9,
            "turning rates out of link " + std::to_string(col + 1) + " sum to " +
                std::to_string(sum) + " > 1");
  }

  for (int row = 0; row < z; ++row) {
    bool has_row_of_way = false;
    for (int col = 0; col < s; ++col) {
      const double v = raw.stage_matrix(row, col);
      require(v == 0.0 || v == 1.0, "stage matrix entries must be 0 or 1");
      has_row_of_way = has_row_of_way || v == 1.0;
    }
    require(has_row_of_way, "link " + std::to_string(row + 1) + " has no stage with right of way");
  }

  // The junction stage sets must partition {0..S-1}.
  std::vector<int> owner(s, -1);
  for (int jj = 0; jj < j; ++jj) {
    for (int st : raw.junction_stages[jj]) {
      require(st >= 0 && st < s, "stage index out of range at junction " + std::to_string(jj + 1));
      require(owner[st] == -1, "stage in two junctions (stage " + std::to_string(st + 1) + ")");
      owner[st] = jj;
    }
  }
  for (int st = 0; st < s; ++st) {
    require(owner[st] != -1, "stage " + std::to_string(st + 1) + " not assigned to any junction");
  }

  for (int st = 0; st < s; ++st) {
    require(raw.g_min(st) >= 0.0, "negative minimum green (stage " + std::to_string(st + 1) + ")");
  }
  for (int jj = 0; jj < j; ++jj) {
    require(raw.lost_time(jj) >= 0.0, "negative lost time (junction " + std::to_string(jj + 1) + ")");
    double min_total = raw.lost_time(jj);
    for (int st : raw.junction_stages[jj]) min_total += raw.g_min(st);
    require(min_total <= raw.cycle + 1e-9,
            "green-time constraints infeasible at junction " + std::to_string(jj + 1) +
                ": minimum greens plus lost time exceed the cycle");
  }

  return raw;
}

MatX build_bu(const TrafficNetwork& net) {
  const int z = net.z_count;
  const MatX scaled = (VecX::Ones(z) - net.exit_rate).asDiagonal() * net.turn;
  return net.cycle * (scaled - MatX::Identity(z, z));
}

MatX build_bg(const TrafficNetwork& net) {
  return (build_bu(net) / net.cycle) * net.sat_flow.asDiagonal() * net.stage_matrix;
}

TrafficNetwork prepare_network(TrafficNetwork raw) {
  TrafficNetwork net = validate_network(std::move(raw));
  net.b_u = build_bu(net);
  net.b_g = build_bg(net);
  return net;
}

VecX flows_from_greens(const VecX& greens, const TrafficNetwork& net) {
  if (greens.size() != net.s_count) throw ConfigError("green vector length mismatch");
  if ((greens.array() < 0.0).any()) throw ConfigError("negative green time");
  return net.sat_flow.asDiagonal() * net.stage_matrix * greens / net.cycle;
}

}  // namespace safctl
