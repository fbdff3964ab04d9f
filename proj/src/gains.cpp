#include "safctl/gains.hpp"

#include <fstream>

#include "safctl/errors.hpp"
#include "safctl/synthesis.hpp"

namespace safctl {

using nlohmann::ordered_json;

namespace {

ordered_json matrix_json(const MatX& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

GainSet build_gain_set(const TrafficNetwork& net, const MatX& r) {
  const int s = net.s_count;
  if (r.rows() != s || r.cols() != s) {
    throw ConfigError("dimension mismatch: input weight");
  }

  const int rank = controllability_rank<double>(net.b_g);
  if (rank != s) {
    throw ModelError("controllability rank " + std::to_string(rank) +
                     " does not match stage count " + std::to_string(s));
  }

  Decomposition<double> d = build_decomposition<double>(net.b_g);
  Eigen::JacobiSVD<MatX> bg1_svd(d.bg1);
  const auto& sv = bg1_svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 ||
      sv(0) / sv(sv.size() - 1) > tol::kCondLimit) {
    throw ModelError("reachable input matrix is ill conditioned (cond " +
                     std::to_string(sv(0) / sv(sv.size() - 1)) + ")");
  }

  GainSet g;
  g.w = d.w;
  g.w_inv = d.w_inv;
  g.bg1 = d.bg1;
  g.q1 = build_q1<double>(d, net.x_max);
  g.r = r;
  g.p = solve_dare_identity<double>(g.bg1, g.q1, g.r);
  g.k1 = feedback_gain<double>(g.bg1, g.p, g.r);
  g.ke1 = feedforward_gain<double>(g.bg1, g.p, g.r, g.k1);

  MatX residual = g.p - g.q1 - g.p * (MatX::Identity(s, s) - g.bg1 * g.k1);
  g.dare_residual = residual.lpNorm<Eigen::Infinity>();
  if (g.dare_residual > 1e-9) {
    throw ModelError("Riccati residual " + std::to_string(g.dare_residual) +
                     " above 1e-9");
  }

  // Lift to link coordinates: act on the reachable block, ignore the rest.
  MatX selector = MatX::Zero(s, net.z_count);
  selector.leftCols(s) = MatX::Identity(s, s);
  g.k = g.k1 * selector * g.w_inv;
  g.ke = g.ke1 * selector * g.w_inv;
  return g;
}

GainSet build_gain_set(const TrafficNetwork& net, double r_diag) {
  if (r_diag <= 0.0) throw ConfigError("input weight must be positive");
  return build_gain_set(net, MatX(r_diag * MatX::Identity(net.s_count, net.s_count)));
}

ordered_json gains_to_json(const GainSet& gains) {
  ordered_json doc;
  doc["W"] = matrix_json(gains.w);
  doc["K"] = matrix_json(gains.k);
  doc["Ke"] = matrix_json(gains.ke);
  doc["P"] = matrix_json(gains.p);
  ordered_json meta;
  meta["dare_tolerance"] = tol::kDare;
  meta["dare_residual"] = gains.dare_residual;
  meta["rank_tolerance_rel"] = tol::kRankRel;
  meta["condition_limit"] = tol::kCondLimit;
  doc["metadata"] = std::move(meta);
  return doc;
}

void save_gains(const GainSet& gains, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write gains file: " + path);
  out << gains_to_json(gains).dump(2) << "\n";
}

}  // namespace safctl
