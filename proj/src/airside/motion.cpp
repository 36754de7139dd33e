#include "airside/motion.hpp"

#include <algorithm>
#include <cmath>

namespace cvq::airside {

TaxiState advance_taxi(TaxiState taxi, RandomStream& rng) {
  const bool stopped = rng.bernoulli(taxi.p_stop);
  if (!stopped && !taxi.arrived()) {
    double next = taxi.distance_m + taxi.step_distance_m;
    // Same tolerance as moving_steps, so accumulated rounding never adds a step.
    if (taxi.path_length_m - next <= 1e-9 * std::max(1.0, taxi.path_length_m)) next = taxi.path_length_m;
    taxi.distance_m = next;
  }
  return taxi;
}

std::size_t moving_steps(double path_length_m, double step_distance_m) {
  if (path_length_m <= 0.0) return 0;
  // Guard against 3000/300 landing a hair above 10.
  const double ratio = path_length_m / step_distance_m;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

int runway_capacity_draw(const RunwayServer& server, RandomStream& rng) {
  const int b1 = rng.bernoulli(server.p1) ? 1 : 0;
  const int b2 = rng.bernoulli(server.p2) ? 1 : 0;
  return b1 + b2;
}

std::vector<std::size_t> runway_service(RunwayServer& server, RandomStream& rng) {
  const auto served = std::min<std::size_t>(static_cast<std::size_t>(runway_capacity_draw(server, rng)),
                                            server.queue.size());
  std::vector<std::size_t> departing;
  departing.reserve(served);
  for (std::size_t i = 0; i < served; ++i) {
    departing.push_back(server.queue.front());
    server.queue.pop_front();
  }
  return departing;
}

}  // namespace cvq::airside
