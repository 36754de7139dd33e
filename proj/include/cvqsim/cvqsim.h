/*
 * cvqsim: departure-operations simulator with a collaborative virtual queue.
 *
 * C interface over the simulator core. Handles are opaque and owned by the
 * caller; every function returning cvq_status leaves a message retrievable
 * with cvq_last_error() (thread-local) when it fails.
 */
#ifndef CVQSIM_CVQSIM_H
#define CVQSIM_CVQSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CVQSIM_BUILDING)
#    define CVQSIM_API __declspec(dllexport)
#  else
#    define CVQSIM_API __declspec(dllimport)
#  endif
#else
#  define CVQSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvq_status {
  CVQ_OK = 0,
  CVQ_ERROR_CONFIG = 1,      /* invalid configuration or lattice */
  CVQ_ERROR_INPUT = 2,       /* malformed schedule/sample/trace data or bad argument */
  CVQ_ERROR_INFEASIBLE = 3,  /* calibration targets no parameter can reproduce */
  CVQ_ERROR_RUNTIME = 4,     /* a simulation that could not complete */
  CVQ_ERROR_IO = 5,          /* file system failures */
  CVQ_ERROR_INTERNAL = 6
} cvq_status;

typedef struct cvq_config cvq_config;
typedef struct cvq_trace cvq_trace;
typedef struct cvq_sweep cvq_sweep;

/* Weight classes as ASCII codes. */
#define CVQ_CLASS_HEAVY 'H'
#define CVQ_CLASS_LARGE 'L'
#define CVQ_CLASS_SMALL 'S'

typedef struct cvq_flight_record {
  uint64_t id;
  char airline[16];
  char weight_class; /* 'H', 'L' or 'S' */
  int32_t passengers;
  int64_t gate;
  uint32_t runway;
  int64_t ready_step;
  int64_t pushback_step;
  int64_t queue_entry_step;
  int64_t wheelsoff_step;
  int32_t planes_out_at_pushback;
  int32_t active_planes_at_ready;
} cvq_flight_record;

typedef struct cvq_day_summary {
  size_t flights;
  int64_t last_wheelsoff_step;
  double passenger_wait_mean_min;
  double plane_wait_mean_min;
  double taxi_out_mean_min;
  double taxi_out_std_min;
  int32_t max_planes_out;
} cvq_day_summary;

/* Class order in per-class arrays: heavy, large, small. A NaN marks a value
 * that is undefined (no flights of that class, or no baseline). */
typedef struct cvq_sweep_point {
  double alpha;
  size_t flights;
  double passenger_wait_mean_min;
  double plane_wait_mean_min;
  double plane_wait_std_min;
  double benefit_pct;
  double class_wait_mean_min[3];
  double class_wait_std_min[3];
  double class_evolution_pct[3];
  double congested_passenger_wait_mean_min;
  double congested_benefit_pct;
  double taxi_out_mean_min;
  double taxi_out_std_min;
  double planes_out_at_pushback_mean;
} cvq_sweep_point;

typedef struct cvq_scenario_row {
  char distribution[64];
  double alpha;
  double benefit_pct;
  double congested_benefit_pct;
  double passenger_wait_fcfs_min;
  double passenger_wait_min;
} cvq_scenario_row;

typedef struct cvq_taxi_fit {
  double p_stop;
  size_t moving_steps;
  double sample_mean_steps;
  double sample_variance_steps;
  double model_variance_steps;
  double variance_residual;
} cvq_taxi_fit;

CVQSIM_API const char* cvq_version(void);
CVQSIM_API const char* cvq_last_error(void);
CVQSIM_API const char* cvq_status_name(cvq_status status);

/* ---- configuration ---------------------------------------------------- */

CVQSIM_API cvq_status cvq_config_load(const char* path, cvq_config** out);
/* Parses INI text; relative paths resolve against base_dir. */
CVQSIM_API cvq_status cvq_config_parse(const char* text, const char* base_dir, cvq_config** out);
/* Overrides one `section.name` key and re-validates; on failure the handle
 * keeps its previous value. */
CVQSIM_API cvq_status cvq_config_set(cvq_config* config, const char* key, const char* value);
/* Writes the effective settings (`key = value` lines) into buf. `needed`
 * receives the full length including the terminator. */
CVQSIM_API cvq_status cvq_config_describe(const cvq_config* config, char* buf, size_t buf_len, size_t* needed);
CVQSIM_API cvq_status cvq_config_hash(const cvq_config* config, char out[17]);
CVQSIM_API void cvq_config_free(cvq_config* config);

/* ---- single days ------------------------------------------------------ */

/* Simulates day `day` of the configured experiment with policy.alpha. */
CVQSIM_API cvq_status cvq_run_day(const cvq_config* config, uint32_t day, cvq_trace** out);
CVQSIM_API size_t cvq_trace_flight_count(const cvq_trace* trace);
CVQSIM_API size_t cvq_trace_step_count(const cvq_trace* trace);
CVQSIM_API cvq_status cvq_trace_flight(const cvq_trace* trace, size_t index, cvq_flight_record* out);
CVQSIM_API cvq_status cvq_trace_step_takeoffs(const cvq_trace* trace, size_t index, int64_t* step, int32_t* takeoffs);
CVQSIM_API cvq_status cvq_trace_summary(const cvq_trace* trace, cvq_day_summary* out);
/* Writes <prefix>.flights.csv and <prefix>.steps.csv. */
CVQSIM_API cvq_status cvq_trace_write(const cvq_trace* trace, const char* path_prefix);
/* 1 when every field of both traces is identical, 0 otherwise. */
CVQSIM_API int cvq_trace_equal(const cvq_trace* a, const cvq_trace* b);
CVQSIM_API void cvq_trace_free(cvq_trace* trace);

/* ---- sweeps ----------------------------------------------------------- */

/* Runs seeds.n_days days for every alpha of sweep.alpha_grid. threads = 0
 * uses all hardware threads. Results are identical for any thread count. */
CVQSIM_API cvq_status cvq_sweep_run(const cvq_config* config, uint32_t threads, int keep_traces, cvq_sweep** out);
/* Rebuilds a sweep from a directory written with traces. */
CVQSIM_API cvq_status cvq_sweep_load(const char* dir, cvq_sweep** out);
CVQSIM_API size_t cvq_sweep_point_count(const cvq_sweep* sweep);
CVQSIM_API cvq_status cvq_sweep_get_point(const cvq_sweep* sweep, size_t index, cvq_sweep_point* out);
/* Writes sweep.csv, curves.csv, provenance.json and optionally traces/. */
CVQSIM_API cvq_status cvq_sweep_emit(const cvq_sweep* sweep, const char* out_dir, int write_traces);
CVQSIM_API void cvq_sweep_free(cvq_sweep* sweep);

/* One sweep per distribution (monopoly, top5, top10, custom:<path>); rows
 * (capacity >= count) receive the comparison at the largest alpha. */
CVQSIM_API cvq_status cvq_scenarios_run(const cvq_config* config, const char* const* distributions, size_t count,
                                        uint32_t threads, const char* out_dir, int write_traces,
                                        cvq_scenario_row* rows);

/* ---- calibration ------------------------------------------------------ */

CVQSIM_API cvq_status cvq_fit_runway(double mean_rate, double std_rate, double* p1, double* p2);
CVQSIM_API cvq_status cvq_fit_stop_probability(const double* samples_min, size_t count, double path_length_m,
                                               double step_distance_m, double minutes_per_step, cvq_taxi_fit* out);
/* Fits both models from files and writes an INI fragment to out_path (or
 * into buf when out_path is NULL; `needed` as in cvq_config_describe). */
CVQSIM_API cvq_status cvq_calibrate_files(const char* samples_path, const char* targets_path, const char* out_path,
                                          char* buf, size_t buf_len, size_t* needed);

/* ---- misc ------------------------------------------------------------- */

/* Parses `start:step:end` or a comma list into out (capacity cap). */
CVQSIM_API cvq_status cvq_parse_alpha_grid(const char* text, double* out, size_t cap, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* CVQSIM_CVQSIM_H */
