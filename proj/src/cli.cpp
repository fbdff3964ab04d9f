#include "safctl/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "safctl/controller.hpp"
#include "safctl/errors.hpp"
#include "safctl/examples.hpp"
#include "safctl/gains.hpp"
#include "safctl/metrics.hpp"
#include "safctl/network_io.hpp"
#include "safctl/noise.hpp"
#include "safctl/run.hpp"
#include "safctl/scenario.hpp"

namespace safctl {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SAFCTL_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

void write_manifest(const fs::path& dir, const std::string& network,
                    const std::string& scenario, const Scenario& sc) {
  ordered_json doc;
  doc["network"] = network;
  doc["scenario"] = scenario;
  doc["controller"] = variant_name(sc.controller.variant);
  doc["out_dir"] = dir.string();
  ordered_json seeds;
  seeds["demand"] = sc.seeds.demand;
  seeds["sensor"] = sc.seeds.sensor;
  doc["seeds"] = std::move(seeds);
  doc["horizon_s"] = sc.horizon_s;
  doc["tool_version"] = kToolVersion;
  ordered_json tols;
  tols["dare_tolerance"] = tol::kDare;
  tols["filter_tolerance"] = tol::kFilter;
  tols["rank_tolerance_rel"] = tol::kRankRel;
  tols["knapsack_tolerance"] = tol::kKnapsack;
  doc["tolerances"] = std::move(tols);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  out << doc.dump(2) << "\n";
}

int cmd_gains(const std::string& network_path, double r_weight,
              const std::string& out_path, std::ostream& out) {
  TrafficNetwork net = load_network(network_path);
  if (r_weight <= 0.0) throw ConfigError("--r-weight must be positive");
  GainSet gains = build_gain_set(net, r_weight);
  save_gains(gains, out_path);
  out << "links " << net.z_count << ", stages " << net.s_count
      << ", controllability rank " << net.s_count << "\n";
  out << "dare residual " << gains.dare_residual << "\n";
  out << "wrote " << out_path << "\n";
  return 0;
}

int cmd_simulate(const std::string& network_path, const std::string& scenario_path,
                 const std::string& controller, const std::string& out_dir_flag,
                 std::optional<std::uint64_t> seed, std::optional<double> horizon,
                 std::ostream& out) {
  TrafficNetwork net = load_network(network_path);
  Scenario sc = load_scenario(scenario_path);
  if (!controller.empty()) sc.controller.variant = variant_from_string(controller);
  if (seed) {
    sc.seeds.demand = *seed;
    sc.seeds.sensor = derive_seed(*seed, 1);
  }
  if (horizon) {
    if (*horizon <= 0.0) throw ConfigError("--horizon must be positive");
    sc.horizon_s = *horizon;
  }

  const fs::path dir = resolve_out_dir(out_dir_flag);
  fs::create_directories(dir);

  RunResult result = run(net, sc);
  save_trace(result.trace, (dir / "trace.csv").string());
  save_greens(result.cycle_time_s, result.greens, (dir / "greens.csv").string());
  MetricsReport report =
      build_report(result.trace, net.x_max, variant_name(sc.controller.variant));
  save_report(report, (dir / "metrics.json").string());
  write_manifest(dir, network_path, scenario_path, sc);

  char line[160];
  std::snprintf(line, sizeof(line), "%s: TTS %.1f veh h, RQB %.1f veh, TTB %.2f veh h\n",
                variant_name(sc.controller.variant).c_str(), report.tts_veh_h,
                report.rqb_veh, report.ttb_veh_h);
  out << line;
  out << "wrote " << (dir / "trace.csv").string() << "\n";
  return 0;
}

int cmd_metrics(const std::string& trace_path, const std::string& network_path,
                const std::string& controller, const std::string& out_path,
                std::ostream& out) {
  TrafficNetwork net = load_network(network_path);
  RunTrace trace = load_trace(trace_path);
  if (trace.x.cols() != net.z_count) {
    throw ConfigError("trace has " + std::to_string(trace.x.cols()) +
                      " links but network has " + std::to_string(net.z_count));
  }
  MetricsReport report = build_report(trace, net.x_max, controller);
  save_report(report, out_path);
  out << "wrote " << out_path << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& files, bool csv, std::ostream& out,
                std::ostream& err) {
  if (files.size() < 2) throw ConfigError("compare needs at least two metrics files");
  std::vector<MetricsReport> reports;
  for (const std::string& f : files) reports.push_back(load_report(f));

  bool mismatched = false;
  for (const MetricsReport& r : reports) {
    if (std::abs(r.horizon_s - reports.front().horizon_s) > 1e-6) mismatched = true;
  }
  if (mismatched) {
    err << "warning: reports cover different horizons; totals are not comparable\n";
  }

  if (csv) {
    out << "method,tts_veh_h,rqb_veh,ttb_veh_h,horizon_s\n";
    for (const MetricsReport& r : reports) {
      char line[160];
      std::snprintf(line, sizeof(line), "%s,%.3f,%.3f,%.3f,%.0f\n", r.controller.c_str(),
                    r.tts_veh_h, r.rqb_veh, r.ttb_veh_h, r.horizon_s);
      out << line;
    }
    return 0;
  }

  out << "Method         TTS (veh h)    RQB (veh)      TTB (veh h)\n";
  for (const MetricsReport& r : reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %-14.1f %-14.1f %-14.2f%s\n",
                  r.controller.c_str(), r.tts_veh_h, r.rqb_veh, r.ttb_veh_h,
                  mismatched && std::abs(r.horizon_s - reports.front().horizon_s) > 1e-6
                      ? " (different horizon)"
                      : "");
    out << line;
  }
  return 0;
}

int cmd_make_example(const std::string& kind, const std::string& out_dir_flag,
                     std::ostream& out) {
  const fs::path dir = resolve_out_dir(out_dir_flag);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  if (kind == "chain2") {
    save_network(make_chain2(), (dir / "chain2-network.json").string());
    save_scenario(make_chain2_scenario(), (dir / "chain2-scenario.json").string());
    written = {dir / "chain2-network.json", dir / "chain2-scenario.json"};
  } else if (kind == "grid4") {
    save_network(make_grid4(), (dir / "grid4-network.json").string());
    save_scenario(make_pulse_scenario(), (dir / "grid4-pulse-scenario.json").string());
    save_scenario(make_flat_scenario(), (dir / "grid4-flat-scenario.json").string());
    written = {dir / "grid4-network.json", dir / "grid4-pulse-scenario.json",
               dir / "grid4-flat-scenario.json"};
  } else {
    throw ConfigError("unknown example \"" + kind + "\" (expected chain2 or grid4)");
  }
  for (const fs::path& p : written) out << "wrote " << p.string() << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"store-and-forward urban signal control laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string network_path, scenario_path, controller, out_path, out_dir, trace_path;
  double r_weight = 1e-4;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::vector<std::string> compare_files;
  bool compare_csv = false;
  std::string example_kind;

  CLI::App* gains = app.add_subcommand("gains", "synthesize controller gains");
  gains->add_option("--network", network_path, "network JSON file")->required();
  gains->add_option("--r-weight", r_weight, "diagonal input weight (default 1e-4)");
  gains->add_option("--out", out_path, "output gains JSON file")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop simulation");
  simulate->add_option("--network", network_path, "network JSON file")->required();
  simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--controller", controller,
                       "tuc | tuc-ff | tuc-ideal | tuc-ff-ideal (overrides scenario)");
  simulate->add_option("--out", out_dir, "output directory (default $SAFCTL_OUT or .)");
  simulate->add_option("--seed", seed, "override demand seed (sensor seed derived)");
  simulate->add_option("--horizon", horizon, "override horizon in seconds");

  CLI::App* metrics = app.add_subcommand("metrics", "compute metrics from a trace");
  metrics->add_option("--trace", trace_path, "trace CSV file")->required();
  metrics->add_option("--network", network_path, "network JSON file")->required();
  metrics->add_option("--controller", controller, "method label for the report");
  metrics->add_option("--out", out_path, "output metrics JSON file")->required();

  CLI::App* compare = app.add_subcommand("compare", "tabulate metrics reports");
  compare->add_option("files", compare_files, "metrics JSON files")->expected(-1);
  compare->add_flag("--csv", compare_csv, "emit CSV instead of an aligned table");

  CLI::App* example = app.add_subcommand("make-example", "emit bundled example files");
  example->add_option("kind", example_kind, "chain2 | grid4")->required();
  example->add_option("--out", out_dir, "output directory (default $SAFCTL_OUT or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (gains->parsed()) return cmd_gains(network_path, r_weight, out_path, out);
    if (simulate->parsed()) {
      return cmd_simulate(network_path, scenario_path, controller, out_dir, seed,
                          horizon, out);
    }
    if (metrics->parsed()) {
      return cmd_metrics(trace_path, network_path, controller, out_path, out);
    }
    if (compare->parsed()) return cmd_compare(compare_files, compare_csv, out, err);
    if (example->parsed()) return cmd_make_example(example_kind, out_dir, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("safctl");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace safctl
