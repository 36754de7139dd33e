#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "sim/trace.hpp"

namespace cvq::metrics {

/// Waiting time is measured from ready-to-push-back to wheels-off, so gate
/// holding counts toward it.
struct WaitRecord {
  double wait_min = 0.0;
  double taxi_out_min = 0.0;  // push-back to wheels-off
  int passengers = 0;
  WeightClass weight_class = WeightClass::Large;
  std::string airline;
  int active_planes_at_ready = 0;
  int planes_out_at_pushback = 0;
};

std::vector<WaitRecord> wait_records(const sim::DayTrace& trace);

/// sum(passengers * wait) / sum(passengers). Throws MetricError when empty or
/// when no record carries passengers.
double passenger_weighted_wait(std::span<const WaitRecord> records);

/// Unweighted mean wait, optionally restricted to one class. Throws MetricError when empty.
double mean_wait(std::span<const WaitRecord> records, std::optional<WeightClass> filter = std::nullopt);

/// Population standard deviation of waits. Throws MetricError with fewer than two records.
double wait_std(std::span<const WaitRecord> records, std::optional<WeightClass> filter = std::nullopt);

/// 100 * (baseline - current) / baseline. Throws MetricError on a non-positive baseline.
double benefit_percent(double current, double baseline);

struct ClassStats {
  std::size_t count = 0;
  double wait_mean = 0.0;
  double wait_std = 0.0;
};

/// One point of an alpha sweep, aggregated over all simulated days.
struct SweepPoint {
  double alpha = 0.0;
  std::size_t flights = 0;
  double passenger_wait_mean = 0.0;
  double plane_wait_mean = 0.0;
  double plane_wait_std = 0.0;
  std::array<ClassStats, kWeightClassCount> per_class{};
  double benefit_pct = 0.0;
  std::array<std::optional<double>, kWeightClassCount> evolution_pct{};
  /// Passenger-weighted wait restricted to flights that became ready with at
  /// least `congestion_threshold` active planes.
  std::optional<double> congested_passenger_wait_mean;
  std::optional<double> congested_benefit_pct;
  std::size_t congested_flights = 0;
  double taxi_out_mean = 0.0;
  double taxi_out_std = 0.0;
  double planes_out_at_pushback_mean = 0.0;
};

SweepPoint summarize(double alpha, std::span<const WaitRecord> records, int congestion_threshold);

/// benefit_percent on the passenger waits of two sweep points.
double benefit_percent(const SweepPoint& point, const SweepPoint& baseline);

/// Per class: 100 * (W_class(point) - W_class(baseline)) / W_class(baseline).
/// A class with no baseline mean (missing or zero) yields nullopt.
std::array<std::optional<double>, kWeightClassCount> per_type_evolution(const SweepPoint& point,
                                                                         const SweepPoint& baseline);

/// Fills benefit and evolution fields of every point against `baseline`.
void apply_baseline(std::span<SweepPoint> points, const SweepPoint& baseline);

struct CurveBin {
  int bin = 0;
  std::size_t count = 0;
  double value = 0.0;
  bool low_confidence = false;
};

inline constexpr std::size_t kMinBinSamples = 20;

/// Passenger-weighted mean wait per active-planes-at-ready bin (width 1).
std::vector<CurveBin> wait_vs_active_planes(std::span<const WaitRecord> records,
                                            std::size_t min_samples = kMinBinSamples);

/// Population std of taxi-out time per planes-out-at-push-back bin.
std::vector<CurveBin> taxi_std_vs_planes_out(std::span<const WaitRecord> records,
                                             std::size_t min_samples = kMinBinSamples);

/// Bins that meet the sample threshold.
std::vector<CurveBin> confident_bins(std::span<const CurveBin> curve);

}  // namespace cvq::metrics
