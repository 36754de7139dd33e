#include "harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <ctime>

#include "json.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"

#ifndef CVQSIM_VERSION
#define CVQSIM_VERSION "0.0.0"
#endif

namespace cvq::harness {

namespace fs = std::filesystem;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); }

std::string day_name(std::uint32_t day) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "day_%03u.csv", day);
  return buf;
}

std::string alpha_dir(double alpha) { return "alpha_" + fixed6(alpha); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

void make_directories(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

std::string format_alpha_context(double alpha, std::uint32_t day) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(alpha=%.6f, day=%u) ", alpha, day);
  return buf;
}

/// Runs job(i) for i in [0, n) on a small pool. The first failure (in job
/// order) is rethrown after all workers stop.
template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& context) {
  throw E(context + e.what());
}

}  // namespace

std::uint64_t day_seed(std::uint64_t master_seed, std::uint32_t day) { return derive_seed(master_seed, "day", day); }

traffic::Schedule day_schedule(const ExperimentConfig& config, std::uint32_t day) {
  if (config.traffic.fixed_schedule) return *config.traffic.fixed_schedule;
  RandomStream rng(derive_seed(day_seed(config.master_seed, day), "schedule"));
  traffic::SynthesisInputs in;
  in.n_flights = config.traffic.n_flights;
  in.hourly_profile = config.traffic.rate_profile;
  in.fleet = config.traffic.fleet;
  in.airlines = config.traffic.airlines;
  in.gates = config.sim.graph->gates();
  in.steps_per_hour = 3600 / config.sim.step_seconds;
  return traffic::synth_schedule(in, rng);
}

sim::DayTrace run_single_day(const ExperimentConfig& config, std::uint32_t day) {
  return sim::Simulator(config.sim).run_day(day_schedule(config, day), day_seed(config.master_seed, day));
}

SweepResult sweep_alpha(const ExperimentConfig& config, const SweepOptions& options) {
  const auto& grid = config.alpha_grid;
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    throw ConfigError("sweep.alpha_grid must contain 0, the first-come-first-served baseline");
  }
  const std::uint32_t days = config.n_days;

  std::vector<traffic::Schedule> schedules(days);
  parallel_for(days, options.threads, [&](std::size_t d) {
    schedules[d] = day_schedule(config, static_cast<std::uint32_t>(d));
  });

  std::vector<sim::Simulator> simulators;
  simulators.reserve(grid.size());
  for (double alpha : grid) {
    auto sc = config.sim;
    sc.policy.alpha = alpha;
    simulators.emplace_back(std::move(sc));
  }

  std::vector<std::vector<sim::DayTrace>> traces(grid.size(), std::vector<sim::DayTrace>(days));
  parallel_for(grid.size() * days, options.threads, [&](std::size_t job) {
    const std::size_t a = job / days;
    const auto d = static_cast<std::uint32_t>(job % days);
    try {
      auto trace = simulators[a].run_day(schedules[d], day_seed(config.master_seed, d));
      trace.steps.clear();
      trace.steps.shrink_to_fit();
      traces[a][d] = std::move(trace);
    } catch (const ConfigError& e) {
      rethrow_with_context(e, format_alpha_context(grid[a], d));
    } catch (const InputError& e) {
      rethrow_with_context(e, format_alpha_context(grid[a], d));
    } catch (const SimulationError& e) {
      rethrow_with_context(e, format_alpha_context(grid[a], d));
    }
  });

  Provenance prov;
  prov.config_hash = config_hash(config);
  prov.master_seed = config.master_seed;
  prov.days = days;
  prov.alpha_grid = grid;
  prov.distribution = config.traffic.fixed_schedule ? "schedule-file" : config.traffic.distribution;
  prov.step_seconds = config.sim.step_seconds;
  prov.load_limit = config.sim.load_limit;
  prov.congestion_threshold = config.congestion_threshold;
  prov.code_version = CVQSIM_VERSION;

  auto result = summarize_traces(std::move(traces), std::move(prov));
  if (!options.keep_traces) result.traces.clear();
  return result;
}

SweepResult summarize_traces(std::vector<std::vector<sim::DayTrace>> traces, Provenance provenance) {
  SweepResult result;
  const auto& grid = provenance.alpha_grid;
  if (traces.size() != grid.size()) throw InputError("trace set does not match the alpha grid");
  std::optional<std::size_t> baseline;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    std::vector<metrics::WaitRecord> records;
    for (const auto& day : traces[a]) {
      auto r = metrics::wait_records(day);
      records.insert(records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    result.points.push_back(metrics::summarize(grid[a], records, provenance.congestion_threshold));
    result.wait_curves.push_back(metrics::wait_vs_active_planes(records));
    result.taxi_curves.push_back(metrics::taxi_std_vs_planes_out(records));
    if (grid[a] == 0.0 && !baseline) baseline = a;
  }
  if (baseline) {
    const auto base = result.points[*baseline];
    metrics::apply_baseline(result.points, base);
  }
  result.traces = std::move(traces);
  result.provenance = std::move(provenance);
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "alpha,flights,passenger_wait_mean_min,plane_wait_mean_min,plane_wait_std_min,benefit_pct";
  for (auto c : kAllClasses) out << ',' << class_name(c) << "_wait_mean_min," << class_name(c) << "_wait_std_min";
  for (auto c : kAllClasses) out << ',' << class_name(c) << "_evolution_pct";
  out << ",congested_flights,congested_passenger_wait_mean_min,congested_benefit_pct,taxi_out_mean_min,"
         "taxi_out_std_min,planes_out_at_pushback_mean\n";
  for (const auto& p : result.points) {
    out << fixed6(p.alpha) << ',' << p.flights << ',' << fixed6(p.passenger_wait_mean) << ','
        << fixed6(p.plane_wait_mean) << ',' << fixed6(p.plane_wait_std) << ',' << fixed6(p.benefit_pct);
    for (const auto& c : p.per_class) out << ',' << fixed6(c.wait_mean) << ',' << fixed6(c.wait_std);
    for (const auto& e : p.evolution_pct) out << ',' << fixed6(e);
    out << ',' << p.congested_flights << ',' << fixed6(p.congested_passenger_wait_mean) << ','
        << fixed6(p.congested_benefit_pct) << ',' << fixed6(p.taxi_out_mean) << ',' << fixed6(p.taxi_out_std) << ','
        << fixed6(p.planes_out_at_pushback_mean) << '\n';
  }
  return out.str();
}

std::string curves_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "curve,alpha,bin,count,value_min,low_confidence\n";
  const auto emit = [&](const char* name, double alpha, const std::vector<metrics::CurveBin>& curve) {
    for (const auto& b : curve) {
      out << name << ',' << fixed6(alpha) << ',' << b.bin << ',' << b.count << ',' << fixed6(b.value) << ','
          << (b.low_confidence ? 1 : 0) << '\n';
    }
  };
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    emit("wait_vs_active_planes", result.points[i].alpha, result.wait_curves[i]);
  }
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    emit("taxi_std_vs_planes_out", result.points[i].alpha, result.taxi_curves[i]);
  }
  return out.str();
}

std::string provenance_json(const Provenance& p) {
  nlohmann::ordered_json j;
  j["config_hash"] = p.config_hash;
  j["master_seed"] = p.master_seed;
  j["days"] = p.days;
  j["alpha_grid"] = p.alpha_grid;
  j["distribution"] = p.distribution;
  j["step_seconds"] = p.step_seconds;
  j["load_limit"] = p.load_limit;
  j["congestion_threshold"] = p.congestion_threshold;
  j["code_version"] = p.code_version;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  j["created_utc"] = stamp;
  return j.dump(2) + "\n";
}

void emit_results(const SweepResult& result, const fs::path& out_dir, bool write_traces) {
  make_directories(out_dir);
  write_file(out_dir / "sweep.csv", sweep_csv(result));
  write_file(out_dir / "curves.csv", curves_csv(result));
  write_file(out_dir / "provenance.json", provenance_json(result.provenance));
  if (!write_traces) return;
  if (result.traces.size() != result.points.size()) throw IoError("traces were not kept for this sweep; cannot write traces/");
  for (std::size_t a = 0; a < result.points.size(); ++a) {
    const auto dir = out_dir / "traces" / alpha_dir(result.points[a].alpha);
    make_directories(dir);
    for (std::size_t d = 0; d < result.traces[a].size(); ++d) {
      std::ostringstream buf;
      sim::write_flight_csv(result.traces[a][d], buf);
      write_file(dir / day_name(static_cast<std::uint32_t>(d)), buf.str());
    }
  }
}

SweepResult load_results(const fs::path& dir) {
  std::ifstream in(dir / "provenance.json");
  if (!in) throw IoError("cannot open " + (dir / "provenance.json").string());
  Provenance p;
  try {
    const auto j = nlohmann::json::parse(in);
    p.config_hash = j.at("config_hash").get<std::string>();
    p.master_seed = j.at("master_seed").get<std::uint64_t>();
    p.days = j.at("days").get<std::uint32_t>();
    p.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    p.distribution = j.at("distribution").get<std::string>();
    p.step_seconds = j.at("step_seconds").get<int>();
    p.load_limit = j.at("load_limit").get<int>();
    p.congestion_threshold = j.at("congestion_threshold").get<int>();
    p.code_version = j.at("code_version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError((dir / "provenance.json").string() + ": " + e.what());
  }
  std::vector<std::vector<sim::DayTrace>> traces(p.alpha_grid.size());
  for (std::size_t a = 0; a < p.alpha_grid.size(); ++a) {
    for (std::uint32_t d = 0; d < p.days; ++d) {
      traces[a].push_back(sim::load_flight_csv(dir / "traces" / alpha_dir(p.alpha_grid[a]) / day_name(d), p.step_seconds));
    }
  }
  return summarize_traces(std::move(traces), std::move(p));
}

std::vector<ScenarioRow> run_scenarios(const ExperimentConfig& config, std::span<const std::string> distributions,
                                       const fs::path& spec_dir, const fs::path& out_dir,
                                       const SweepOptions& options, bool write_traces) {
  std::vector<ScenarioRow> rows;
  if (distributions.empty()) return rows;
  if (config.traffic.fixed_schedule) {
    throw ConfigError("scenarios need synthesized traffic; remove traffic.schedule to compare distributions");
  }
  for (const auto& spec : distributions) {
    auto scenario = config;
    scenario.traffic.airlines = resolve_distribution(spec, spec_dir);
    scenario.traffic.distribution = spec;
    scenario.canonical += "scenario = " + spec + "\n";
    auto opts = options;
    opts.keep_traces = write_traces;
    const auto result = sweep_alpha(scenario, opts);
    std::string name = spec.rfind("custom:", 0) == 0 ? "custom_" + fs::path(spec.substr(7)).stem().string() : spec;
    emit_results(result, out_dir / name, write_traces);

    const auto& base = *std::find_if(result.points.begin(), result.points.end(), [](const auto& p) { return p.alpha == 0.0; });
    const auto& last = *std::max_element(result.points.begin(), result.points.end(),
                                         [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
    rows.push_back({name, last.alpha, last.benefit_pct, last.congested_benefit_pct, base.passenger_wait_mean,
                    last.passenger_wait_mean});
  }
  make_directories(out_dir);
  write_file(out_dir / "scenarios.csv", scenarios_csv(rows));
  return rows;
}

std::string scenarios_csv(std::span<const ScenarioRow> rows) {
  std::ostringstream out;
  out << "distribution,alpha,passenger_wait_fcfs_min,passenger_wait_min,benefit_pct,congested_benefit_pct\n";
  for (const auto& r : rows) {
    out << r.distribution << ',' << fixed6(r.alpha) << ',' << fixed6(r.passenger_wait_fcfs) << ','
        << fixed6(r.passenger_wait_at_alpha) << ',' << fixed6(r.benefit_pct) << ',' << fixed6(r.congested_benefit_pct)
        << '\n';
  }
  return out.str();
}

std::vector<double> read_samples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open samples file " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double v = 0.0;
    if (!(fields >> v)) {
      std::string token;
      std::istringstream check(line);
      if (check >> token) throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected a duration in minutes");
      continue;
    }
    std::string extra;
    if (fields >> extra) throw InputError(path.string() + ":" + std::to_string(line_no) + ": one duration per line");
    out.push_back(v);
  }
  return out;
}

CalibrationReport calibrate_from_files(const fs::path& samples, const fs::path& targets) {
  const auto tree = read_config_tree(targets);
  const auto get = [&](const std::string& key) -> double {
    const auto v = tree.values.get_optional<std::string>(key);
    if (!v) throw ConfigError(targets.string() + ": missing " + key);
    try {
      return std::stod(*v);
    } catch (const std::exception&) {
      throw ConfigError(targets.string() + ": " + key + " is not a number");
    }
  };
  CalibrationReport report;
  report.step_seconds = tree.values.get<int>("sim.step_seconds", 30);
  if (report.step_seconds <= 0) throw ConfigError("sim.step_seconds must be positive");
  report.reference_path_m = get("taxi.reference_path_m");
  report.step_distance_m = get("taxi.step_distance");
  report.mean_rate = get("runway.mean_rate");
  report.std_rate = get("runway.std_rate");

  const auto data = read_samples(samples);
  report.taxi = calibrate::fit_stop_probability(data, report.reference_path_m, report.step_distance_m,
                                                report.step_seconds / 60.0);
  report.runway = calibrate::fit_runway_bernoullis(report.mean_rate, report.std_rate);

  std::ostringstream f;
  f.precision(10);
  f << "# fitted from " << data.size() << " taxi samples; reference path " << report.reference_path_m << " m ("
    << report.taxi.moving_steps << " moving steps)\n";
  f << "# taxi-time variance (steps^2): sample " << report.taxi.sample_variance_steps << ", model "
    << report.taxi.model_variance_steps << ", residual " << report.taxi.variance_residual << "\n";
  f << "[taxi]\n";
  f << "p_stop = " << report.taxi.p_stop << "\n";
  f << "step_distance = " << report.step_distance_m << "\n";
  f << "[runway]\n";
  f << "p1 = " << report.runway.p1 << "\n";
  f << "p2 = " << report.runway.p2 << "\n";
  report.fragment = f.str();
  return report;
}

}  // namespace cvq::harness
