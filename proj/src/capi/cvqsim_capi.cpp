#include "cvqsim/cvqsim.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "core/errors.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "metrics/metrics.hpp"

#ifndef CVQSIM_VERSION
#define CVQSIM_VERSION "0.0.0"
#endif

struct cvq_config {
  cvq::harness::ConfigTree tree;
  cvq::harness::ExperimentConfig resolved;
};

struct cvq_trace {
  cvq::sim::DayTrace trace;
};

struct cvq_sweep {
  cvq::harness::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
cvq_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CVQ_OK;
  } catch (const cvq::ConfigError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_CONFIG;
  } catch (const cvq::InfeasibleError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_INFEASIBLE;
  } catch (const cvq::InputError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_INPUT;
  } catch (const cvq::MetricError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_INPUT;
  } catch (const cvq::SimulationError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_RUNTIME;
  } catch (const cvq::IoError& e) {
    g_last_error = e.what();
    return CVQ_ERROR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CVQ_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CVQ_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CVQ_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw cvq::InputError(what);
}

void copy_text(const std::string& text, char* buf, std::size_t buf_len, std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || buf_len == 0) return;
  const std::size_t n = std::min(text.size(), buf_len - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

template <std::size_t N>
void copy_fixed(const std::string& text, char (&dst)[N]) {
  std::memset(dst, 0, N);
  std::memcpy(dst, text.data(), std::min(text.size(), N - 1));
}

double or_nan(const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::quiet_NaN()); }

}  // namespace

extern "C" {

const char* cvq_version(void) { return CVQSIM_VERSION; }

const char* cvq_last_error(void) { return g_last_error.c_str(); }

const char* cvq_status_name(cvq_status status) {
  switch (status) {
    case CVQ_OK: return "ok";
    case CVQ_ERROR_CONFIG: return "configuration error";
    case CVQ_ERROR_INPUT: return "input error";
    case CVQ_ERROR_INFEASIBLE: return "infeasible";
    case CVQ_ERROR_RUNTIME: return "runtime error";
    case CVQ_ERROR_IO: return "i/o error";
    case CVQ_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

cvq_status cvq_config_load(const char* path, cvq_config** out) {
  return guarded([&] {
    require(path && out, "cvq_config_load: null argument");
    auto cfg = std::make_unique<cvq_config>();
    cfg->tree = cvq::harness::read_config_tree(path);
    cfg->resolved = cvq::harness::resolve(cfg->tree);
    *out = cfg.release();
  });
}

cvq_status cvq_config_parse(const char* text, const char* base_dir, cvq_config** out) {
  return guarded([&] {
    require(text && out, "cvq_config_parse: null argument");
    auto cfg = std::make_unique<cvq_config>();
    cfg->tree = cvq::harness::parse_config_tree(text, base_dir ? base_dir : ".");
    cfg->resolved = cvq::harness::resolve(cfg->tree);
    *out = cfg.release();
  });
}

cvq_status cvq_config_set(cvq_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "cvq_config_set: null argument");
    auto tree = config->tree;
    cvq::harness::set_value(tree, key, value);
    auto resolved = cvq::harness::resolve(tree);
    config->tree = std::move(tree);
    config->resolved = std::move(resolved);
  });
}

cvq_status cvq_config_describe(const cvq_config* config, char* buf, size_t buf_len, size_t* needed) {
  return guarded([&] {
    require(config != nullptr, "cvq_config_describe: null config");
    copy_text(config->resolved.canonical, buf, buf_len, needed);
  });
}

cvq_status cvq_config_hash(const cvq_config* config, char out[17]) {
  return guarded([&] {
    require(config && out, "cvq_config_hash: null argument");
    const auto h = cvq::harness::config_hash(config->resolved);
    std::memcpy(out, h.c_str(), 17);
  });
}

void cvq_config_free(cvq_config* config) { delete config; }

cvq_status cvq_run_day(const cvq_config* config, uint32_t day, cvq_trace** out) {
  return guarded([&] {
    require(config && out, "cvq_run_day: null argument");
    auto t = std::make_unique<cvq_trace>();
    t->trace = cvq::harness::run_single_day(config->resolved, day);
    *out = t.release();
  });
}

size_t cvq_trace_flight_count(const cvq_trace* trace) { return trace ? trace->trace.flights.size() : 0; }

size_t cvq_trace_step_count(const cvq_trace* trace) { return trace ? trace->trace.steps.size() : 0; }

cvq_status cvq_trace_flight(const cvq_trace* trace, size_t index, cvq_flight_record* out) {
  return guarded([&] {
    require(trace && out, "cvq_trace_flight: null argument");
    require(index < trace->trace.flights.size(), "cvq_trace_flight: index out of range");
    const auto& f = trace->trace.flights[index];
    *out = {};
    out->id = f.id;
    copy_fixed(f.airline, out->airline);
    out->weight_class = cvq::class_code(f.weight_class);
    out->passengers = f.passengers;
    out->gate = f.gate;
    out->runway = f.runway;
    out->ready_step = f.ready_step;
    out->pushback_step = f.pushback_step;
    out->queue_entry_step = f.queue_entry_step;
    out->wheelsoff_step = f.wheelsoff_step;
    out->planes_out_at_pushback = f.planes_out_at_pushback;
    out->active_planes_at_ready = f.active_planes_at_ready;
  });
}

cvq_status cvq_trace_step_takeoffs(const cvq_trace* trace, size_t index, int64_t* step, int32_t* takeoffs) {
  return guarded([&] {
    require(trace && step && takeoffs, "cvq_trace_step_takeoffs: null argument");
    require(index < trace->trace.steps.size(), "cvq_trace_step_takeoffs: index out of range");
    const auto& s = trace->trace.steps[index];
    *step = s.step;
    int total = 0;
    for (int t : s.takeoffs) total += t;
    *takeoffs = total;
  });
}

cvq_status cvq_trace_summary(const cvq_trace* trace, cvq_day_summary* out) {
  return guarded([&] {
    require(trace && out, "cvq_trace_summary: null argument");
    *out = {};
    const auto records = cvq::metrics::wait_records(trace->trace);
    out->flights = records.size();
    for (const auto& f : trace->trace.flights) out->last_wheelsoff_step = std::max<int64_t>(out->last_wheelsoff_step, f.wheelsoff_step);
    for (const auto& s : trace->trace.steps) {
      int total = 0;
      for (int c : s.planes_out) total += c;
      out->max_planes_out = std::max(out->max_planes_out, total);
    }
    if (records.empty()) return;
    const auto p = cvq::metrics::summarize(0.0, records, 0);
    out->passenger_wait_mean_min = p.passenger_wait_mean;
    out->plane_wait_mean_min = p.plane_wait_mean;
    out->taxi_out_mean_min = p.taxi_out_mean;
    out->taxi_out_std_min = p.taxi_out_std;
  });
}

cvq_status cvq_trace_write(const cvq_trace* trace, const char* path_prefix) {
  return guarded([&] {
    require(trace && path_prefix, "cvq_trace_write: null argument");
    const std::string prefix(path_prefix);
    std::ofstream flights(prefix + ".flights.csv", std::ios::binary | std::ios::trunc);
    if (!flights) throw cvq::IoError("cannot write " + prefix + ".flights.csv");
    cvq::sim::write_flight_csv(trace->trace, flights);
    std::ofstream steps(prefix + ".steps.csv", std::ios::binary | std::ios::trunc);
    if (!steps) throw cvq::IoError("cannot write " + prefix + ".steps.csv");
    cvq::sim::write_step_csv(trace->trace, steps);
    if (!flights.flush() || !steps.flush()) throw cvq::IoError("write failed for " + prefix);
  });
}

int cvq_trace_equal(const cvq_trace* a, const cvq_trace* b) {
  if (!a || !b) return 0;
  return a->trace == b->trace ? 1 : 0;
}

void cvq_trace_free(cvq_trace* trace) { delete trace; }

cvq_status cvq_sweep_run(const cvq_config* config, uint32_t threads, int keep_traces, cvq_sweep** out) {
  return guarded([&] {
    require(config && out, "cvq_sweep_run: null argument");
    auto s = std::make_unique<cvq_sweep>();
    s->result = cvq::harness::sweep_alpha(config->resolved, {threads, keep_traces != 0});
    *out = s.release();
  });
}

cvq_status cvq_sweep_load(const char* dir, cvq_sweep** out) {
  return guarded([&] {
    require(dir && out, "cvq_sweep_load: null argument");
    auto s = std::make_unique<cvq_sweep>();
    s->result = cvq::harness::load_results(dir);
    *out = s.release();
  });
}

size_t cvq_sweep_point_count(const cvq_sweep* sweep) { return sweep ? sweep->result.points.size() : 0; }

cvq_status cvq_sweep_get_point(const cvq_sweep* sweep, size_t index, cvq_sweep_point* out) {
  return guarded([&] {
    require(sweep && out, "cvq_sweep_get_point: null argument");
    require(index < sweep->result.points.size(), "cvq_sweep_get_point: index out of range");
    const auto& p = sweep->result.points[index];
    *out = {};
    out->alpha = p.alpha;
    out->flights = p.flights;
    out->passenger_wait_mean_min = p.passenger_wait_mean;
    out->plane_wait_mean_min = p.plane_wait_mean;
    out->plane_wait_std_min = p.plane_wait_std;
    out->benefit_pct = p.benefit_pct;
    for (std::size_t c = 0; c < 3; ++c) {
      out->class_wait_mean_min[c] = p.per_class[c].count ? p.per_class[c].wait_mean : std::nan("");
      out->class_wait_std_min[c] = p.per_class[c].count ? p.per_class[c].wait_std : std::nan("");
      out->class_evolution_pct[c] = or_nan(p.evolution_pct[c]);
    }
    out->congested_passenger_wait_mean_min = or_nan(p.congested_passenger_wait_mean);
    out->congested_benefit_pct = or_nan(p.congested_benefit_pct);
    out->taxi_out_mean_min = p.taxi_out_mean;
    out->taxi_out_std_min = p.taxi_out_std;
    out->planes_out_at_pushback_mean = p.planes_out_at_pushback_mean;
  });
}

cvq_status cvq_sweep_emit(const cvq_sweep* sweep, const char* out_dir, int write_traces) {
  return guarded([&] {
    require(sweep && out_dir, "cvq_sweep_emit: null argument");
    cvq::harness::emit_results(sweep->result, out_dir, write_traces != 0);
  });
}

void cvq_sweep_free(cvq_sweep* sweep) { delete sweep; }

cvq_status cvq_scenarios_run(const cvq_config* config, const char* const* distributions, size_t count,
                             uint32_t threads, const char* out_dir, int write_traces, cvq_scenario_row* rows) {
  return guarded([&] {
    require(config != nullptr, "cvq_scenarios_run: null config");
    if (count == 0) return;
    require(distributions && out_dir, "cvq_scenarios_run: null argument");
    std::vector<std::string> specs;
    for (size_t i = 0; i < count; ++i) {
      require(distributions[i] != nullptr, "cvq_scenarios_run: null distribution name");
      specs.emplace_back(distributions[i]);
    }
    const auto result = cvq::harness::run_scenarios(config->resolved, specs, std::filesystem::current_path(), out_dir,
                                                    {threads, false}, write_traces != 0);
    if (!rows) return;
    for (size_t i = 0; i < result.size(); ++i) {
      rows[i] = {};
      copy_fixed(result[i].distribution, rows[i].distribution);
      rows[i].alpha = result[i].alpha;
      rows[i].benefit_pct = result[i].benefit_pct;
      rows[i].congested_benefit_pct = or_nan(result[i].congested_benefit_pct);
      rows[i].passenger_wait_fcfs_min = result[i].passenger_wait_fcfs;
      rows[i].passenger_wait_min = result[i].passenger_wait_at_alpha;
    }
  });
}

cvq_status cvq_fit_runway(double mean_rate, double std_rate, double* p1, double* p2) {
  return guarded([&] {
    require(p1 && p2, "cvq_fit_runway: null argument");
    const auto fit = cvq::calibrate::fit_runway_bernoullis(mean_rate, std_rate);
    *p1 = fit.p1;
    *p2 = fit.p2;
  });
}

cvq_status cvq_fit_stop_probability(const double* samples_min, size_t count, double path_length_m,
                                    double step_distance_m, double minutes_per_step, cvq_taxi_fit* out) {
  return guarded([&] {
    require(out && (samples_min || count == 0), "cvq_fit_stop_probability: null argument");
    const auto fit = cvq::calibrate::fit_stop_probability(std::span(samples_min, count), path_length_m,
                                                          step_distance_m, minutes_per_step);
    *out = {fit.p_stop, fit.moving_steps, fit.sample_mean_steps, fit.sample_variance_steps, fit.model_variance_steps,
            fit.variance_residual};
  });
}

cvq_status cvq_calibrate_files(const char* samples_path, const char* targets_path, const char* out_path, char* buf,
                               size_t buf_len, size_t* needed) {
  return guarded([&] {
    require(samples_path && targets_path, "cvq_calibrate_files: null argument");
    const auto report = cvq::harness::calibrate_from_files(samples_path, targets_path);
    if (out_path) {
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      if (!out) throw cvq::IoError(std::string("cannot write ") + out_path);
      out << report.fragment;
      if (!out.flush()) throw cvq::IoError(std::string("write failed for ") + out_path);
    }
    copy_text(report.fragment, buf, buf_len, needed);
  });
}

cvq_status cvq_parse_alpha_grid(const char* text, double* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(text && count, "cvq_parse_alpha_grid: null argument");
    const auto grid = cvq::harness::parse_alpha_grid(text);
    *count = grid.size();
    if (grid.size() > cap || (!out && !grid.empty())) {
      if (out || cap) throw cvq::InputError("cvq_parse_alpha_grid: output capacity too small");
      return;
    }
    std::copy(grid.begin(), grid.end(), out);
  });
}

}  // extern "C"
