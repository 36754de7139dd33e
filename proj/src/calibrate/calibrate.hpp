#pragma once

#include <cstddef>
#include <span>

namespace cvq::calibrate {

/// Taxi-stop fit: matches the mean number of steps k / (1 - p_stop) of the
/// negative-binomial taxi time to the sample mean. The variance cannot be
/// matched independently and is reported as a diagnostic.
struct TaxiFit {
  double p_stop = 0.0;
  std::size_t moving_steps = 0;        // k = ceil(path / step_distance)
  double sample_mean_steps = 0.0;
  double sample_variance_steps = 0.0;  // population variance of the samples
  double model_variance_steps = 0.0;   // k p / (1 - p)^2
  double variance_residual = 0.0;      // sample - model, in steps^2
};

/// `samples_min` are unimpeded taxi-out durations in minutes. Requires at least
/// 30 positive samples. Throws InfeasibleError when the sample mean is below
/// the deterministic minimum of k steps.
TaxiFit fit_stop_probability(std::span<const double> samples_min, double path_length_m, double step_distance_m,
                             double minutes_per_step);

struct RunwayFit {
  double p1 = 0.0;  // p1 >= p2
  double p2 = 0.0;
};

struct VarianceBounds {
  double min_variance = 0.0;
  double max_variance = 0.0;
};

/// Achievable variance of b1 + b2 for a given mean in [0, 2].
VarianceBounds runway_variance_bounds(double mean_rate);

/// Solves p1 + p2 = mean, p1(1-p1) + p2(1-p2) = std^2. Throws InfeasibleError
/// (naming the achievable variance interval) when no pair in [0,1]^2 exists.
RunwayFit fit_runway_bernoullis(double mean_rate, double std_rate);

struct RunwayMoments {
  double mean = 0.0;
  double variance = 0.0;
};

RunwayMoments runway_moments(double p1, double p2);

}  // namespace cvq::calibrate
