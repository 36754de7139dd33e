#include "metrics/metrics.hpp"

#include <cmath>
#include <map>

#include "core/errors.hpp"

namespace cvq::metrics {

namespace {

bool keep(const WaitRecord& r, std::optional<WeightClass> filter) { return !filter || r.weight_class == *filter; }

struct Accumulator {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double weighted = 0.0;
  double weight = 0.0;
};

}  // namespace

std::vector<WaitRecord> wait_records(const sim::DayTrace& trace) {
  const double mps = trace.minutes_per_step();
  std::vector<WaitRecord> out;
  out.reserve(trace.flights.size());
  for (const auto& f : trace.flights) {
    out.push_back({static_cast<double>(f.wheelsoff_step - f.ready_step) * mps,
                   static_cast<double>(f.wheelsoff_step - f.pushback_step) * mps, f.passengers, f.weight_class,
                   f.airline, f.active_planes_at_ready, f.planes_out_at_pushback});
  }
  return out;
}

double passenger_weighted_wait(std::span<const WaitRecord> records) {
  if (records.empty()) throw MetricError("passenger-weighted wait of an empty record set");
  double num = 0.0;
  double den = 0.0;
  for (const auto& r : records) {
    num += r.passengers * r.wait_min;
    den += r.passengers;
  }
  if (den <= 0.0) throw MetricError("passenger-weighted wait with zero total passengers");
  return num / den;
}

double mean_wait(std::span<const WaitRecord> records, std::optional<WeightClass> filter) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!keep(r, filter)) continue;
    sum += r.wait_min;
    ++n;
  }
  if (n == 0) throw MetricError("mean wait of an empty record set");
  return sum / static_cast<double>(n);
}

double wait_std(std::span<const WaitRecord> records, std::optional<WeightClass> filter) {
  std::size_t n = 0;
  double sum = 0.0;
  for (const auto& r : records) {
    if (!keep(r, filter)) continue;
    sum += r.wait_min;
    ++n;
  }
  if (n < 2) throw MetricError("wait std needs at least two records");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : records) {
    if (!keep(r, filter)) continue;
    ss += (r.wait_min - mean) * (r.wait_min - mean);
  }
  return std::sqrt(ss / static_cast<double>(n));
}

double benefit_percent(double current, double baseline) {
  if (!(baseline > 0.0)) throw MetricError("benefit baseline must be positive");
  return 100.0 * (baseline - current) / baseline;
}

double benefit_percent(const SweepPoint& point, const SweepPoint& baseline) {
  return benefit_percent(point.passenger_wait_mean, baseline.passenger_wait_mean);
}

SweepPoint summarize(double alpha, std::span<const WaitRecord> records, int congestion_threshold) {
  SweepPoint p;
  p.alpha = alpha;
  p.flights = records.size();
  if (records.empty()) return p;
  p.passenger_wait_mean = passenger_weighted_wait(records);
  p.plane_wait_mean = mean_wait(records);
  p.plane_wait_std = records.size() >= 2 ? wait_std(records) : 0.0;
  for (auto c : kAllClasses) {
    auto& s = p.per_class[class_index(c)];
    for (const auto& r : records) s.count += r.weight_class == c ? 1 : 0;
    if (s.count >= 1) s.wait_mean = mean_wait(records, c);
    if (s.count >= 2) s.wait_std = wait_std(records, c);
  }
  double num = 0.0, den = 0.0, taxi_sum = 0.0, taxi_sq = 0.0, out_sum = 0.0;
  for (const auto& r : records) {
    if (r.active_planes_at_ready >= congestion_threshold) {
      num += r.passengers * r.wait_min;
      den += r.passengers;
      ++p.congested_flights;
    }
    taxi_sum += r.taxi_out_min;
    out_sum += r.planes_out_at_pushback;
  }
  const auto n = static_cast<double>(records.size());
  p.taxi_out_mean = taxi_sum / n;
  for (const auto& r : records) taxi_sq += (r.taxi_out_min - p.taxi_out_mean) * (r.taxi_out_min - p.taxi_out_mean);
  p.taxi_out_std = std::sqrt(taxi_sq / n);
  p.planes_out_at_pushback_mean = out_sum / n;
  if (den > 0.0) p.congested_passenger_wait_mean = num / den;
  return p;
}

std::array<std::optional<double>, kWeightClassCount> per_type_evolution(const SweepPoint& point,
                                                                         const SweepPoint& baseline) {
  std::array<std::optional<double>, kWeightClassCount> out{};
  for (std::size_t c = 0; c < kWeightClassCount; ++c) {
    const auto& base = baseline.per_class[c];
    const auto& cur = point.per_class[c];
    if (base.count == 0 || cur.count == 0 || !(base.wait_mean > 0.0)) continue;
    out[c] = 100.0 * (cur.wait_mean - base.wait_mean) / base.wait_mean;
  }
  return out;
}

void apply_baseline(std::span<SweepPoint> points, const SweepPoint& baseline) {
  for (auto& p : points) {
    p.benefit_pct = baseline.passenger_wait_mean > 0.0 ? benefit_percent(p, baseline) : 0.0;
    p.evolution_pct = per_type_evolution(p, baseline);
    if (p.congested_passenger_wait_mean && baseline.congested_passenger_wait_mean &&
        *baseline.congested_passenger_wait_mean > 0.0) {
      p.congested_benefit_pct = benefit_percent(*p.congested_passenger_wait_mean, *baseline.congested_passenger_wait_mean);
    } else {
      p.congested_benefit_pct.reset();
    }
  }
}

std::vector<CurveBin> wait_vs_active_planes(std::span<const WaitRecord> records, std::size_t min_samples) {
  std::map<int, Accumulator> bins;
  for (const auto& r : records) {
    auto& acc = bins[r.active_planes_at_ready];
    ++acc.n;
    acc.weighted += r.passengers * r.wait_min;
    acc.weight += r.passengers;
    acc.sum += r.wait_min;
  }
  std::vector<CurveBin> curve;
  for (const auto& [bin, acc] : bins) {
    // A bin of zero-passenger flights falls back to the plain mean.
    const double value = acc.weight > 0.0 ? acc.weighted / acc.weight : acc.sum / static_cast<double>(acc.n);
    curve.push_back({bin, acc.n, value, acc.n < min_samples});
  }
  return curve;
}

std::vector<CurveBin> taxi_std_vs_planes_out(std::span<const WaitRecord> records, std::size_t min_samples) {
  std::map<int, Accumulator> bins;
  for (const auto& r : records) {
    auto& acc = bins[r.planes_out_at_pushback];
    ++acc.n;
    acc.sum += r.taxi_out_min;
  }
  for (const auto& r : records) {
    auto& acc = bins[r.planes_out_at_pushback];
    const double mean = acc.sum / static_cast<double>(acc.n);
    acc.sum_sq += (r.taxi_out_min - mean) * (r.taxi_out_min - mean);
  }
  std::vector<CurveBin> curve;
  for (const auto& [bin, acc] : bins) {
    curve.push_back({bin, acc.n, std::sqrt(acc.sum_sq / static_cast<double>(acc.n)), acc.n < min_samples});
  }
  return curve;
}

std::vector<CurveBin> confident_bins(std::span<const CurveBin> curve) {
  std::vector<CurveBin> out;
  for (const auto& b : curve)
    if (!b.low_confidence) out.push_back(b);
  return out;
}

}  // namespace cvq::metrics
