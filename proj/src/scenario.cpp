#include "safctl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "safctl/errors.hpp"
#include "safctl/jsonutil.hpp"

namespace safctl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<int> parse_links(const json& arr, const std::string& what) {
  std::vector<int> links;
  for (const json& v : arr) {
    if (!v.is_number_integer()) throw ConfigError(what + ": link ids must be integers");
    const int id = v.get<int>();
    if (id < 1) throw ConfigError(what + ": link ids must be positive");
    links.push_back(id);
  }
  if (links.empty()) throw ConfigError(what + ": empty link group");
  return links;
}

std::vector<LinkGroup> parse_groups(const json& arr, const std::string& what) {
  std::vector<LinkGroup> groups;
  for (const json& g : arr) {
    check_keys(g, {"links", "value"}, what);
    LinkGroup lg;
    lg.links = parse_links(require_array(g, "links", what), what);
    lg.value = require_number(g, "value", what);
    groups.push_back(std::move(lg));
  }
  return groups;
}

ordered_json groups_json(const std::vector<LinkGroup>& groups) {
  ordered_json arr = ordered_json::array();
  for (const LinkGroup& g : groups) {
    ordered_json o;
    o["links"] = g.links;
    o["value"] = g.value;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::pair<double, double> parse_range(const json& obj, const char* key,
                                      const std::string& what) {
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(what + ": \"" + key + "\" must be a two-number array");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

DemandSpec parse_demand(const json& doc) {
  check_keys(doc, {"mode", "e_hist"},
             {"amplitude_range", "period_range_h", "profile_t_s", "profile_scale",
              "delta_max", "delta_knot_s", "pulses", "taper_s"},
             "demand");
  DemandSpec d;
  d.mode = doc.at("mode").get<std::string>();
  if (d.mode != "synthetic" && d.mode != "profile") {
    throw ConfigError("demand: mode must be \"synthetic\" or \"profile\"");
  }
  d.e_hist = parse_groups(require_array(doc, "e_hist", "demand e_hist"), "demand e_hist");
  for (const LinkGroup& g : d.e_hist) {
    if (g.value < 0.0) throw ConfigError("demand: e_hist must be nonnegative");
  }
  if (doc.contains("amplitude_range")) {
    std::tie(d.amplitude_lo, d.amplitude_hi) = parse_range(doc, "amplitude_range", "demand");
  }
  if (doc.contains("period_range_h")) {
    std::tie(d.period_lo_h, d.period_hi_h) = parse_range(doc, "period_range_h", "demand");
  }
  if (d.amplitude_lo < 0.0 || d.amplitude_hi < d.amplitude_lo) {
    throw ConfigError("demand: amplitude range must satisfy 0 <= lo <= hi");
  }
  if (d.period_lo_h <= 0.0 || d.period_hi_h < d.period_lo_h) {
    throw ConfigError("demand: period range must satisfy 0 < lo <= hi");
  }
  if (doc.contains("profile_t_s")) {
    for (const json& v : doc.at("profile_t_s")) d.profile_t_s.push_back(v.get<double>());
  }
  if (doc.contains("profile_scale")) {
    for (const json& v : doc.at("profile_scale")) d.profile_scale.push_back(v.get<double>());
  }
  if (doc.contains("delta_max")) d.delta_max = require_number(doc, "delta_max", "demand");
  if (doc.contains("delta_knot_s")) {
    d.delta_knot_s = require_number(doc, "delta_knot_s", "demand");
  }
  if (d.delta_max < 0.0 || d.delta_max >= 1.0) {
    throw ConfigError("demand: delta_max must be in [0,1)");
  }
  if (d.delta_knot_s <= 0.0) throw ConfigError("demand: delta_knot_s must be positive");
  if (doc.contains("pulses")) {
    for (const json& p : doc.at("pulses")) {
      check_keys(p, {"links", "add", "start_s", "end_s"}, {"shape"}, "pulse");
      Pulse pulse;
      pulse.links = parse_links(require_array(p, "links", "pulse"), "pulse");
      pulse.add = require_number(p, "add", "pulse");
      pulse.start_s = require_number(p, "start_s", "pulse");
      pulse.end_s = require_number(p, "end_s", "pulse");
      if (p.contains("shape")) pulse.shape = p.at("shape").get<std::string>();
      if (pulse.shape != "rect" && pulse.shape != "cosine") {
        throw ConfigError("pulse: shape must be \"rect\" or \"cosine\"");
      }
      if (pulse.end_s <= pulse.start_s) {
        throw ConfigError("pulse: end_s must exceed start_s");
      }
      d.pulses.push_back(std::move(pulse));
    }
  }
  if (doc.contains("taper_s")) d.taper_s = require_number(doc, "taper_s", "demand");
  if (d.taper_s < 0.0) throw ConfigError("demand: taper_s must be nonnegative");

  if (d.mode == "profile") {
    if (d.profile_t_s.size() != d.profile_scale.size() || d.profile_t_s.size() < 2) {
      throw ConfigError("demand: profile needs matching profile_t_s/profile_scale with >= 2 knots");
    }
    for (std::size_t i = 1; i < d.profile_t_s.size(); ++i) {
      if (d.profile_t_s[i] <= d.profile_t_s[i - 1]) {
        throw ConfigError("demand: profile_t_s must be strictly increasing");
      }
    }
  } else if (!d.profile_t_s.empty() || !d.profile_scale.empty()) {
    throw ConfigError("demand: profile knots only apply to profile mode");
  }
  return d;
}

ordered_json demand_json(const DemandSpec& d) {
  ordered_json o;
  o["mode"] = d.mode;
  o["e_hist"] = groups_json(d.e_hist);
  if (d.mode == "synthetic") {
    o["amplitude_range"] = {d.amplitude_lo, d.amplitude_hi};
    o["period_range_h"] = {d.period_lo_h, d.period_hi_h};
  } else {
    o["profile_t_s"] = d.profile_t_s;
    o["profile_scale"] = d.profile_scale;
    o["delta_max"] = d.delta_max;
    o["delta_knot_s"] = d.delta_knot_s;
  }
  o["pulses"] = ordered_json::array();
  for (const Pulse& p : d.pulses) {
    ordered_json pj;
    pj["links"] = p.links;
    pj["add"] = p.add;
    pj["start_s"] = p.start_s;
    pj["end_s"] = p.end_s;
    pj["shape"] = p.shape;
    o["pulses"].push_back(std::move(pj));
  }
  o["taper_s"] = d.taper_s;
  return o;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  check_keys(doc, {"demand", "horizon_s"},
             {"sensor", "estimator", "controller", "seeds"}, "scenario");
  Scenario sc;
  sc.demand = parse_demand(doc.at("demand"));
  sc.horizon_s = require_number(doc, "horizon_s", "scenario");
  if (sc.horizon_s <= 0.0) throw ConfigError("scenario: horizon_s must be positive");

  if (doc.contains("sensor")) {
    const json& s = doc.at("sensor");
    check_keys(s, {}, {"white_coef", "colored_coef"}, "sensor");
    if (s.contains("white_coef")) sc.sensor.white_coef = require_number(s, "white_coef", "sensor");
    if (s.contains("colored_coef")) {
      sc.sensor.colored_coef = require_number(s, "colored_coef", "sensor");
    }
    if (sc.sensor.white_coef < 0.0 || sc.sensor.colored_coef < 0.0) {
      throw ConfigError("sensor: noise coefficients must be nonnegative");
    }
  }

  if (doc.contains("estimator")) {
    const json& e = doc.at("estimator");
    check_keys(e, {}, {"period_s", "qx", "qe", "r"}, "estimator");
    if (e.contains("period_s")) sc.estimator.period_s = require_number(e, "period_s", "estimator");
    if (sc.estimator.period_s <= 0.0) {
      throw ConfigError("estimator: period_s must be positive");
    }
    if (e.contains("qx")) sc.estimator.qx = parse_groups(require_array(e, "qx", "estimator"), "estimator qx");
    if (e.contains("qe")) sc.estimator.qe = parse_groups(require_array(e, "qe", "estimator"), "estimator qe");
    if (e.contains("r")) sc.estimator.r = parse_groups(require_array(e, "r", "estimator"), "estimator r");
  }

  if (doc.contains("controller")) {
    const json& c = doc.at("controller");
    check_keys(c, {}, {"variant", "r_weight", "tick_s", "c_ug", "blocking"}, "controller");
    if (c.contains("variant")) {
      sc.controller.variant = variant_from_string(c.at("variant").get<std::string>());
    }
    if (c.contains("r_weight")) sc.controller.r_weight = require_number(c, "r_weight", "controller");
    if (sc.controller.r_weight <= 0.0) {
      throw ConfigError("controller: r_weight must be positive");
    }
    if (c.contains("tick_s")) sc.controller.tick_s = require_number(c, "tick_s", "controller");
    if (sc.controller.tick_s <= 0.0) throw ConfigError("controller: tick_s must be positive");
    if (c.contains("c_ug")) sc.controller.c_ug = require_number(c, "c_ug", "controller");
    if (sc.controller.c_ug <= 0.0 || sc.controller.c_ug >= 1.0) {
      throw ConfigError("controller: c_ug must be in (0,1)");
    }
    if (c.contains("blocking")) {
      const std::string gate = c.at("blocking").get<std::string>();
      if (gate == "downstream") {
        sc.controller.gate = BlockingGate::kDownstream;
      } else if (gate == "upstream") {
        sc.controller.gate = BlockingGate::kUpstream;
      } else {
        throw ConfigError("controller: blocking must be \"downstream\" or \"upstream\"");
      }
    }
  }

  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    check_keys(s, {}, {"demand", "sensor"}, "seeds");
    auto seed_of = [&](const char* key) -> std::uint64_t {
      const json& v = s.at(key);
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                     v.get<long long>() < 0)) {
        throw ConfigError("seeds: \"" + std::string(key) + "\" must be a nonnegative integer");
      }
      return v.get<std::uint64_t>();
    };
    if (s.contains("demand")) sc.seeds.demand = seed_of("demand");
    if (s.contains("sensor")) sc.seeds.sensor = seed_of("sensor");
  }
  return sc;
}

ordered_json scenario_to_json(const Scenario& sc) {
  ordered_json doc;
  doc["demand"] = demand_json(sc.demand);
  ordered_json sensor;
  sensor["white_coef"] = sc.sensor.white_coef;
  sensor["colored_coef"] = sc.sensor.colored_coef;
  doc["sensor"] = std::move(sensor);
  ordered_json est;
  est["period_s"] = sc.estimator.period_s;
  if (!sc.estimator.qx.empty()) est["qx"] = groups_json(sc.estimator.qx);
  if (!sc.estimator.qe.empty()) est["qe"] = groups_json(sc.estimator.qe);
  if (!sc.estimator.r.empty()) est["r"] = groups_json(sc.estimator.r);
  doc["estimator"] = std::move(est);
  ordered_json ctl;
  ctl["variant"] = variant_name(sc.controller.variant);
  ctl["r_weight"] = sc.controller.r_weight;
  ctl["tick_s"] = sc.controller.tick_s;
  ctl["c_ug"] = sc.controller.c_ug;
  ctl["blocking"] =
      sc.controller.gate == BlockingGate::kDownstream ? "downstream" : "upstream";
  doc["controller"] = std::move(ctl);
  doc["horizon_s"] = sc.horizon_s;
  ordered_json seeds;
  seeds["demand"] = sc.seeds.demand;
  seeds["sensor"] = sc.seeds.sensor;
  doc["seeds"] = std::move(seeds);
  return doc;
}

std::string scenario_to_string(const Scenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file " + path + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file: " + path);
  out << scenario_to_string(sc);
}

VecX expand_groups(const std::vector<LinkGroup>& groups, int z_count, const VecX& fill,
                   const std::string& what) {
  VecX out = fill;
  std::vector<bool> seen(z_count, false);
  for (const LinkGroup& g : groups) {
    for (int id : g.links) {
      if (id < 1 || id > z_count) {
        throw ConfigError(what + ": link " + std::to_string(id) + " out of range");
      }
      if (seen[id - 1]) {
        throw ConfigError(what + ": link " + std::to_string(id) + " in two groups");
      }
      seen[id - 1] = true;
      out(id - 1) = g.value;
    }
  }
  return out;
}

VecX expand_groups(const std::vector<LinkGroup>& groups, int z_count, double fill,
                   const std::string& what) {
  return expand_groups(groups, z_count, VecX(VecX::Constant(z_count, fill)), what);
}

namespace {

double interp_profile(const std::vector<double>& t, const std::vector<double>& v,
                      double at) {
  if (at <= t.front()) return v.front();
  if (at >= t.back()) return v.back();
  auto it = std::upper_bound(t.begin(), t.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (at - t[i - 1]) / (t[i] - t[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

}  // namespace

DemandProfile build_demand(const DemandSpec& spec, int z_count, double tick_s,
                           double horizon_s, std::uint64_t seed) {
  const long ticks = static_cast<long>(std::llround(horizon_s / tick_s));
  if (ticks <= 0) throw ConfigError("demand horizon shorter than one tick");
  if (spec.mode == "profile" && spec.profile_t_s.back() < horizon_s) {
    throw ConfigError("demand: profile ends before the horizon");
  }

  DemandProfile out;
  out.tick_s = tick_s;
  out.horizon_s = horizon_s;
  out.e_hist = expand_groups(spec.e_hist, z_count, 0.0, "demand e_hist");
  out.e = MatX::Zero(ticks, z_count);

  for (int z = 0; z < z_count; ++z) {
    UniformStream draws(derive_seed(seed, static_cast<std::uint64_t>(z)));
    if (spec.mode == "synthetic") {
      const double amp = draws.range(spec.amplitude_lo, spec.amplitude_hi) * out.e_hist(z);
      const double phase = draws.range(0.0, kTwoPi);
      const double period = draws.range(spec.period_lo_h, spec.period_hi_h) * 3600.0;
      for (long k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * tick_s;
        out.e(k, z) = out.e_hist(z) + amp * std::sin(kTwoPi * t / period + phase);
      }
    } else {
      const long knots = static_cast<long>(std::ceil(horizon_s / spec.delta_knot_s)) + 1;
      std::vector<double> knot_t(knots), knot_v(knots);
      for (long i = 0; i < knots; ++i) {
        knot_t[i] = static_cast<double>(i) * spec.delta_knot_s;
        knot_v[i] = draws.range(-spec.delta_max, spec.delta_max);
      }
      for (long k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * tick_s;
        const double scale = interp_profile(spec.profile_t_s, spec.profile_scale, t);
        const double delta = interp_profile(knot_t, knot_v, t);
        out.e(k, z) = out.e_hist(z) * scale * (1.0 + delta);
      }
    }
  }

  for (const Pulse& p : spec.pulses) {
    for (int id : p.links) {
      if (id < 1 || id > z_count) {
        throw ConfigError("pulse: link " + std::to_string(id) + " out of range");
      }
      for (long k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * tick_s;
        if (t < p.start_s || t >= p.end_s) continue;
        if (p.shape == "rect") {
          out.e(k, id - 1) += p.add;
        } else {
          const double tau = (t - p.start_s) / (p.end_s - p.start_s);
          out.e(k, id - 1) += p.add * 0.5 * (1.0 - std::cos(kTwoPi * tau));
        }
      }
    }
  }

  if (spec.taper_s > 0.0) {
    for (long k = 0; k < ticks; ++k) {
      const double end = static_cast<double>(k) * tick_s + tick_s;
      const double f = std::clamp((horizon_s - end) / spec.taper_s, 0.0, 1.0);
      out.e.row(k) *= f;
    }
  }
  return out;
}

}  // namespace safctl
