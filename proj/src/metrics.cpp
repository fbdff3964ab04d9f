#include "safctl/metrics.hpp"

#include <fstream>

#include "safctl/errors.hpp"
#include "safctl/jsonutil.hpp"

namespace safctl {

using nlohmann::json;
using nlohmann::ordered_json;

double tts(const RunTrace& trace) {
  return trace.tick_s * (trace.x.sum() + trace.x_b.sum()) / 3600.0;
}

double rqb(const RunTrace& trace, const VecX& x_max) {
  if (x_max.size() != trace.x.cols()) {
    throw ConfigError("dimension mismatch: capacities vs trace");
  }
  double total = 0.0;
  for (long k = 0; k < trace.x.rows(); ++k) {
    total += (trace.x.row(k).transpose().array().square() / x_max.array()).sum();
  }
  return total;
}

double ttb(const RunTrace& trace) {
  return trace.tick_s * trace.x_b.sum() / 3600.0;
}

MetricsReport build_report(const RunTrace& trace, const VecX& x_max,
                           const std::string& controller) {
  MetricsReport report;
  report.tts_veh_h = tts(trace);
  report.rqb_veh = rqb(trace, x_max);
  report.ttb_veh_h = ttb(trace);
  report.time_s = trace.time_s;
  const long ticks = trace.x.rows();
  report.x_total.resize(ticks);
  report.x_b_total.resize(ticks);
  for (long k = 0; k < ticks; ++k) {
    report.x_total[k] = trace.x.row(k).sum();
    report.x_b_total[k] = trace.x_b.row(k).sum();
  }
  report.controller = controller;
  report.tick_s = trace.tick_s;
  report.horizon_s = trace.tick_s * static_cast<double>(ticks);
  return report;
}

ordered_json report_to_json(const MetricsReport& report) {
  ordered_json doc;
  doc["controller"] = report.controller;
  doc["horizon_s"] = report.horizon_s;
  doc["tick_s"] = report.tick_s;
  doc["tts_veh_h"] = report.tts_veh_h;
  doc["rqb_veh"] = report.rqb_veh;
  doc["ttb_veh_h"] = report.ttb_veh_h;
  ordered_json per_tick;
  per_tick["time_s"] = report.time_s;
  per_tick["x_total"] = report.x_total;
  per_tick["x_b_total"] = report.x_b_total;
  doc["per_tick"] = std::move(per_tick);
  return doc;
}

MetricsReport report_from_json(const json& doc) {
  check_keys(doc,
             {"controller", "horizon_s", "tick_s", "tts_veh_h", "rqb_veh", "ttb_veh_h",
              "per_tick"},
             "metrics report");
  MetricsReport report;
  report.controller = doc.at("controller").get<std::string>();
  report.horizon_s = require_number(doc, "horizon_s", "metrics report");
  report.tick_s = require_number(doc, "tick_s", "metrics report");
  report.tts_veh_h = require_number(doc, "tts_veh_h", "metrics report");
  report.rqb_veh = require_number(doc, "rqb_veh", "metrics report");
  report.ttb_veh_h = require_number(doc, "ttb_veh_h", "metrics report");
  const json& per_tick = doc.at("per_tick");
  check_keys(per_tick, {"time_s", "x_total", "x_b_total"}, "metrics per_tick");
  for (const json& v : per_tick.at("time_s")) report.time_s.push_back(v.get<double>());
  for (const json& v : per_tick.at("x_total")) report.x_total.push_back(v.get<double>());
  for (const json& v : per_tick.at("x_b_total")) {
    report.x_b_total.push_back(v.get<double>());
  }
  return report;
}

void save_report(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write metrics file: " + path);
  out << report_to_json(report).dump(2) << "\n";
}

MetricsReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metrics file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("metrics file " + path + ": " + e.what());
  }
  return report_from_json(doc);
}

}  // namespace safctl
