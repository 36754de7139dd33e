// Command-line front end. Uses only the public C interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvqsim/cvqsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  int code;
};

int exit_code_for(cvq_status status) {
  switch (status) {
    case CVQ_OK: return kExitOk;
    case CVQ_ERROR_CONFIG:
    case CVQ_ERROR_INPUT:
    case CVQ_ERROR_INFEASIBLE: return kExitConfig;
    default: return kExitRuntime;
  }
}

void check(cvq_status status) {
  if (status == CVQ_OK) return;
  std::cerr << "cvqsim: " << cvq_status_name(status) << ": " << cvq_last_error() << "\n";
  throw Failure{exit_code_for(status)};
}

struct ConfigHandle {
  cvq_config* ptr = nullptr;
  ConfigHandle() = default;
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  ~ConfigHandle() { cvq_config_free(ptr); }
};

struct CommonOptions {
  std::string config;
  std::optional<std::string> seed;
  std::optional<std::string> days;
  std::optional<std::string> alpha;
  std::optional<std::string> distribution;
  std::vector<std::string> overrides;
  std::string out;
};

void add_config_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment configuration (INI)")->required();
  cmd->add_option("--seed", o.seed, "master seed (u64)");
  cmd->add_option("--distribution", o.distribution, "monopoly|top5|top10|custom:<path>");
  cmd->add_option("--set", o.overrides, "override a setting: section.key=value (repeatable)");
}

// Paths typed on the command line are relative to the working directory,
// unlike paths inside the config file.
std::string cwd_relative(const std::string& distribution) {
  const std::string prefix = "custom:";
  if (distribution.rfind(prefix, 0) != 0 || distribution.size() == prefix.size()) return distribution;
  return prefix + std::filesystem::absolute(distribution.substr(prefix.size())).string();
}

void set_key(cvq_config* config, const std::string& key, const std::string& value) {
  check(cvq_config_set(config, key.c_str(), value.c_str()));
}

void load(ConfigHandle& handle, const CommonOptions& o) {
  check(cvq_config_load(o.config.c_str(), &handle.ptr));
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "cvqsim: --set expects section.key=value, got '" << kv << "'\n";
      throw Failure{kExitConfig};
    }
    set_key(handle.ptr, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) set_key(handle.ptr, "seeds.master_seed", *o.seed);
  if (o.days) set_key(handle.ptr, "seeds.n_days", *o.days);
  if (o.distribution) set_key(handle.ptr, "traffic.mode", cwd_relative(*o.distribution));
}

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_run(const CommonOptions& o, unsigned day) {
  ConfigHandle config;
  load(config, o);
  if (o.alpha) set_key(config.ptr, "policy.alpha", *o.alpha);

  cvq_trace* trace = nullptr;
  check(cvq_run_day(config.ptr, day, &trace));
  struct Guard {
    cvq_trace* t;
    ~Guard() { cvq_trace_free(t); }
  } guard{trace};

  cvq_day_summary s{};
  check(cvq_trace_summary(trace, &s));
  if (!o.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    char name[32];
    std::snprintf(name, sizeof name, "day_%03u", day);
    const auto prefix = (std::filesystem::path(o.out) / name).string();
    check(cvq_trace_write(trace, prefix.c_str()));
    std::cout << "wrote " << prefix << ".flights.csv and " << prefix << ".steps.csv\n";
  }
  std::cout << "flights " << s.flights << "\n"
            << "last_wheelsoff_step " << s.last_wheelsoff_step << "\n"
            << "passenger_wait_mean_min " << fixed6(s.passenger_wait_mean_min) << "\n"
            << "plane_wait_mean_min " << fixed6(s.plane_wait_mean_min) << "\n"
            << "taxi_out_mean_min " << fixed6(s.taxi_out_mean_min) << "\n"
            << "taxi_out_std_min " << fixed6(s.taxi_out_std_min) << "\n"
            << "max_planes_out " << s.max_planes_out << "\n";
  return kExitOk;
}

void print_points(const cvq_sweep* sweep) {
  std::cout << "alpha      pax_wait  plane_wait  wait_std  benefit%  congested%\n";
  const auto n = cvq_sweep_point_count(sweep);
  for (size_t i = 0; i < n; ++i) {
    cvq_sweep_point p{};
    check(cvq_sweep_get_point(sweep, i, &p));
    std::printf("%-9.4f %9.3f %11.3f %9.3f %9.3f %11.3f\n", p.alpha, p.passenger_wait_mean_min,
                p.plane_wait_mean_min, p.plane_wait_std_min, p.benefit_pct, p.congested_benefit_pct);
  }
}

int cmd_sweep(const CommonOptions& o, unsigned threads, bool no_traces) {
  ConfigHandle config;
  load(config, o);
  if (o.alpha) set_key(config.ptr, "sweep.alpha_grid", *o.alpha);

  cvq_sweep* sweep = nullptr;
  check(cvq_sweep_run(config.ptr, threads, no_traces ? 0 : 1, &sweep));
  struct Guard {
    cvq_sweep* s;
    ~Guard() { cvq_sweep_free(s); }
  } guard{sweep};
  if (!o.out.empty()) {
    check(cvq_sweep_emit(sweep, o.out.c_str(), no_traces ? 0 : 1));
    std::cout << "results in " << o.out << "\n";
  }
  print_points(sweep);
  return kExitOk;
}

int cmd_scenarios(const CommonOptions& o, std::vector<std::string> dists, unsigned threads, bool no_traces) {
  ConfigHandle config;
  load(config, o);
  if (o.alpha) set_key(config.ptr, "sweep.alpha_grid", *o.alpha);
  if (o.out.empty()) {
    std::cerr << "cvqsim: scenarios requires --out\n";
    return kExitConfig;
  }
  // A bare --distribution yields one empty entry.
  std::erase(dists, std::string());
  std::vector<const char*> names;
  for (const auto& d : dists) names.push_back(d.c_str());
  std::vector<cvq_scenario_row> rows(dists.size());
  check(cvq_scenarios_run(config.ptr, names.data(), names.size(), threads, o.out.c_str(), no_traces ? 0 : 1,
                          rows.data()));
  if (rows.empty()) return kExitOk;
  std::cout << "distribution         alpha  benefit%  congested%  fcfs_wait  wait\n";
  for (const auto& r : rows) {
    std::printf("%-20s %6.3f %9.3f %11.3f %10.3f %6.3f\n", r.distribution, r.alpha, r.benefit_pct,
                r.congested_benefit_pct, r.passenger_wait_fcfs_min, r.passenger_wait_min);
  }
  return kExitOk;
}

int cmd_calibrate(const std::string& samples, const std::string& targets, const std::string& out) {
  if (out.empty()) {
    size_t needed = 0;
    check(cvq_calibrate_files(samples.c_str(), targets.c_str(), nullptr, nullptr, 0, &needed));
    std::string buf(needed, '\0');
    check(cvq_calibrate_files(samples.c_str(), targets.c_str(), nullptr, buf.data(), buf.size(), &needed));
    buf.resize(needed - 1);
    std::cout << buf;
  } else {
    check(cvq_calibrate_files(samples.c_str(), targets.c_str(), out.c_str(), nullptr, 0, nullptr));
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_validate(const CommonOptions& o) {
  ConfigHandle config;
  load(config, o);
  size_t needed = 0;
  check(cvq_config_describe(config.ptr, nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(cvq_config_describe(config.ptr, text.data(), text.size(), &needed));
  text.resize(needed - 1);
  char hash[17];
  check(cvq_config_hash(config.ptr, hash));
  std::cout << text << "config_hash = " << hash << "\n";
  return kExitOk;
}

int cmd_report(const std::string& from, const std::string& out) {
  cvq_sweep* sweep = nullptr;
  check(cvq_sweep_load(from.c_str(), &sweep));
  struct Guard {
    cvq_sweep* s;
    ~Guard() { cvq_sweep_free(s); }
  } guard{sweep};
  check(cvq_sweep_emit(sweep, out.c_str(), 0));
  print_points(sweep);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Departure operations simulator with a collaborative virtual queue"};
  app.set_version_flag("--version", std::string(cvq_version()));
  app.require_subcommand(1);

  CommonOptions run_o, sweep_o, scen_o, valid_o;
  unsigned day = 0, threads = 0;
  bool no_traces = false;

  auto* run = app.add_subcommand("run", "simulate one day");
  add_config_options(run, run_o);
  run->add_option("--day", day, "day index (selects the derived day seed)");
  run->add_option("--alpha", run_o.alpha, "policy alpha in [0,1]");
  run->add_option("--out", run_o.out, "directory for the day's trace CSVs");

  auto* sweep = app.add_subcommand("sweep", "alpha sweep over seeded days");
  add_config_options(sweep, sweep_o);
  sweep->add_option("--days", sweep_o.days, "days per alpha");
  sweep->add_option("--alpha", sweep_o.alpha, "grid start:step:end or comma list (must include 0)");
  sweep->add_option("--out", sweep_o.out, "output directory");
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  sweep->add_flag("--no-traces", no_traces, "skip per-day trace files");

  std::vector<std::string> dists{"monopoly", "top5", "top10"};
  auto* scen = app.add_subcommand("scenarios", "one sweep per airline distribution");
  scen->add_option("--config", scen_o.config, "experiment configuration (INI)")->required();
  scen->add_option("--seed", scen_o.seed, "master seed (u64)");
  scen->add_option("--set", scen_o.overrides, "override a setting: section.key=value (repeatable)");
  scen->add_option("--days", scen_o.days, "days per alpha");
  scen->add_option("--alpha", scen_o.alpha, "grid start:step:end or comma list (must include 0)");
  scen->add_option("--out", scen_o.out, "output directory")->required();
  scen->add_option("--distribution", dists, "distributions to compare (repeatable)")->expected(0, -1);
  scen->add_option("--threads", threads, "worker threads (0 = all cores)");
  scen->add_flag("--no-traces", no_traces, "skip per-day trace files");

  std::string samples, targets, fragment_out;
  auto* cal = app.add_subcommand("calibrate", "fit taxi and runway parameters");
  cal->add_option("--samples", samples, "taxi-out durations, minutes, one per line")->required();
  cal->add_option("--targets", targets, "INI file with reference path and runway moments")->required();
  cal->add_option("--out", fragment_out, "write the config fragment here instead of stdout");

  auto* valid = app.add_subcommand("validate-config", "check a configuration and print effective settings");
  add_config_options(valid, valid_o);
  valid->add_option("--days", valid_o.days, "days per alpha");

  std::string report_from, report_out;
  auto* report = app.add_subcommand("report", "recompute sweep CSVs from saved traces");
  report->add_option("--from", report_from, "directory written by sweep")->required();
  report->add_option("--out", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_o, day);
    if (*sweep) return cmd_sweep(sweep_o, threads, no_traces);
    if (*scen) return cmd_scenarios(scen_o, dists, threads, no_traces);
    if (*cal) return cmd_calibrate(samples, targets, fragment_out);
    if (*valid) return cmd_validate(valid_o);
    if (*report) return cmd_report(report_from, report_out);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "cvqsim: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
