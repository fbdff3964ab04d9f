#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "safctl/run.hpp"
#include "safctl/types.hpp"

namespace safctl {

// The three performance measures, plus the per-tick totals they sum.
struct MetricsReport {
  double tts_veh_h = 0.0;  // total time spent, blocked vehicles included
  double rqb_veh = 0.0;    // relative queue balance, sum of x^2 / x_max
  double ttb_veh_h = 0.0;  // total time blocked
  std::vector<double> time_s;
  std::vector<double> x_total;    // sum of occupancies per tick (veh)
  std::vector<double> x_b_total;  // sum of blocked backlog per tick (veh)
  std::string controller;
  double horizon_s = 0.0;
  double tick_s = 0.0;
};

double tts(const RunTrace& trace);
double rqb(const RunTrace& trace, const VecX& x_max);
double ttb(const RunTrace& trace);

MetricsReport build_report(const RunTrace& trace, const VecX& x_max,
                           const std::string& controller);

nlohmann::ordered_json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);
void save_report(const MetricsReport& report, const std::string& path);
MetricsReport load_report(const std::string& path);

}  // namespace safctl
