#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calibrate/calibrate.hpp"
#include "harness/config.hpp"
#include "metrics/metrics.hpp"
#include "sim/trace.hpp"

namespace cvq::harness {

/// Seed of simulated day `day`. Identical for every alpha of a sweep, which
/// gives common random numbers across policies.
std::uint64_t day_seed(std::uint64_t master_seed, std::uint32_t day);

/// The day's departure schedule: the fixed schedule if configured, otherwise a
/// synthetic one drawn from the day's schedule stream.
traffic::Schedule day_schedule(const ExperimentConfig& config, std::uint32_t day);

/// One day with the configured policy.
sim::DayTrace run_single_day(const ExperimentConfig& config, std::uint32_t day);

struct Provenance {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::uint32_t days = 0;
  std::vector<double> alpha_grid;
  std::string distribution;
  int step_seconds = 30;
  int load_limit = 0;
  int congestion_threshold = 9;
  std::string code_version;
};

struct SweepResult {
  std::vector<metrics::SweepPoint> points;                  // one per alpha, grid order
  std::vector<std::vector<metrics::CurveBin>> wait_curves;  // wait vs active planes, per point
  std::vector<std::vector<metrics::CurveBin>> taxi_curves;  // taxi-out std vs planes out, per point
  std::vector<std::vector<sim::DayTrace>> traces;           // per point, per day; empty unless kept
  Provenance provenance;
};

struct SweepOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_traces = true;
};

/// Runs `n_days` days for every alpha of the grid (which must contain 0, the
/// benefit baseline). Errors carry the failing (alpha, day).
SweepResult sweep_alpha(const ExperimentConfig& config, const SweepOptions& options = {});

/// Aggregates per-alpha day traces into sweep points and curves.
SweepResult summarize_traces(std::vector<std::vector<sim::DayTrace>> traces, Provenance provenance);

std::string sweep_csv(const SweepResult& result);
std::string curves_csv(const SweepResult& result);
std::string provenance_json(const Provenance& provenance);

/// Writes sweep.csv, curves.csv, provenance.json and (optionally)
/// traces/alpha_<a>/day_<nnn>.csv under `out_dir`. Throws IoError with the path.
void emit_results(const SweepResult& result, const std::filesystem::path& out_dir, bool write_traces);

/// Rebuilds a sweep result from a directory written by emit_results with traces.
SweepResult load_results(const std::filesystem::path& dir);

struct ScenarioRow {
  std::string distribution;
  double alpha = 0.0;  // largest alpha of the grid
  double benefit_pct = 0.0;
  std::optional<double> congested_benefit_pct;
  double passenger_wait_fcfs = 0.0;
  double passenger_wait_at_alpha = 0.0;
};

/// One sweep per airline distribution spec (monopoly|top5|top10|custom:<path>,
/// custom paths relative to `spec_dir`). Each sweep is emitted under
/// `out_dir/<name>/` and a comparison table goes to `out_dir/scenarios.csv`.
/// An empty list does nothing.
std::vector<ScenarioRow> run_scenarios(const ExperimentConfig& config, std::span<const std::string> distributions,
                                       const std::filesystem::path& spec_dir, const std::filesystem::path& out_dir,
                                       const SweepOptions& options, bool write_traces);

std::string scenarios_csv(std::span<const ScenarioRow> rows);

struct CalibrationReport {
  calibrate::TaxiFit taxi;
  calibrate::RunwayFit runway;
  double reference_path_m = 0.0;
  double step_distance_m = 0.0;
  double mean_rate = 0.0;
  double std_rate = 0.0;
  int step_seconds = 30;
  /// INI fragment with the fitted taxi and runway keys.
  std::string fragment;
};

/// `samples` holds one taxi-out duration in minutes per line; `targets` is an
/// INI file with taxi.reference_path_m, taxi.step_distance, runway.mean_rate,
/// runway.std_rate and optionally sim.step_seconds.
CalibrationReport calibrate_from_files(const std::filesystem::path& samples, const std::filesystem::path& targets);

std::vector<double> read_samples(const std::filesystem::path& path);

}  // namespace cvq::harness
