#include "calibrate/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "airside/motion.hpp"
#include "core/errors.hpp"

namespace cvq::calibrate {

namespace {

constexpr std::size_t kMinSamples = 30;
constexpr double kTolerance = 1e-12;

std::string describe_interval(double mean, const VarianceBounds& b) {
  std::ostringstream os;
  os << "achievable variance for mean " << mean << " is [" << b.min_variance << ", " << b.max_variance << "]";
  return os.str();
}

}  // namespace

TaxiFit fit_stop_probability(std::span<const double> samples_min, double path_length_m, double step_distance_m,
                             double minutes_per_step) {
  if (!(path_length_m > 0.0) || !(step_distance_m > 0.0)) {
    throw InputError("path length and step distance must be positive");
  }
  if (!(minutes_per_step > 0.0)) throw InputError("step length must be positive");
  if (samples_min.size() < kMinSamples) {
    throw InputError("taxi calibration needs at least " + std::to_string(kMinSamples) + " samples, got " +
                     std::to_string(samples_min.size()));
  }
  double sum = 0.0;
  for (double s : samples_min) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("taxi-time samples must be positive");
    sum += s / minutes_per_step;
  }
  TaxiFit fit;
  const auto n = static_cast<double>(samples_min.size());
  fit.moving_steps = airside::moving_steps(path_length_m, step_distance_m);
  fit.sample_mean_steps = sum / n;
  double ss = 0.0;
  for (double s : samples_min) {
    const double d = s / minutes_per_step - fit.sample_mean_steps;
    ss += d * d;
  }
  fit.sample_variance_steps = ss / n;

  const auto k = static_cast<double>(fit.moving_steps);
  if (fit.sample_mean_steps < k * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "infeasible taxi calibration: sample mean " << fit.sample_mean_steps
       << " steps is below the deterministic minimum of " << fit.moving_steps << " steps ("
       << k * minutes_per_step << " min)";
    throw InfeasibleError(os.str());
  }
  fit.p_stop = std::max(0.0, 1.0 - k / fit.sample_mean_steps);
  fit.model_variance_steps = k * fit.p_stop / ((1.0 - fit.p_stop) * (1.0 - fit.p_stop));
  fit.variance_residual = fit.sample_variance_steps - fit.model_variance_steps;
  return fit;
}

VarianceBounds runway_variance_bounds(double mean) {
  VarianceBounds b;
  b.max_variance = mean - mean * mean / 2.0;
  if (mean <= 1.0) {
    b.min_variance = mean - mean * mean;
  } else {
    b.min_variance = (mean - 1.0) * (2.0 - mean);
  }
  return b;
}

RunwayMoments runway_moments(double p1, double p2) {
  return {p1 + p2, p1 * (1.0 - p1) + p2 * (1.0 - p2)};
}

RunwayFit fit_runway_bernoullis(double mean, double std_rate) {
  if (!(mean >= 0.0 && mean <= 2.0)) throw InfeasibleError("runway mean take-off rate must lie in [0, 2] per step");
  if (!(std_rate >= 0.0) || !std::isfinite(std_rate)) throw InputError("runway take-off rate std must be >= 0");
  const double variance = std_rate * std_rate;
  const auto bounds = runway_variance_bounds(mean);
  // p1, p2 are the roots of x^2 - mean x + q with q = (mean^2 - mean + var) / 2;
  // the discriminant simplifies to 2 (mean - var) - mean^2 = (p1 - p2)^2.
  double disc = 2.0 * (mean - variance) - mean * mean;
  if (disc < 0.0) {
    if (disc < -kTolerance) throw InfeasibleError("infeasible runway moments: " + describe_interval(mean, bounds));
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  RunwayFit fit{(mean + root) / 2.0, (mean - root) / 2.0};
  if (fit.p2 < 0.0) {
    if (fit.p2 < -kTolerance) throw InfeasibleError("infeasible runway moments: " + describe_interval(mean, bounds));
    fit.p2 = 0.0;
  }
  if (fit.p1 > 1.0) {
    if (fit.p1 > 1.0 + kTolerance) throw InfeasibleError("infeasible runway moments: " + describe_interval(mean, bounds));
    fit.p1 = 1.0;
  }
  return fit;
}

}  // namespace cvq::calibrate
