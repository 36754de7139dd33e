#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "core/random.hpp"

namespace cvq::airside {

/// Progress of one aircraft along its taxi path.
struct TaxiState {
  double path_length_m = 0.0;
  double distance_m = 0.0;
  double step_distance_m = 1.0;
  double p_stop = 0.0;

  [[nodiscard]] bool arrived() const { return distance_m >= path_length_m; }
};

/// One simulation step of taxi motion: with probability `p_stop` the aircraft
/// is held in place, otherwise it moves `step_distance_m`, clamped at the path
/// end. Exactly one random draw is consumed per call, including after arrival.
TaxiState advance_taxi(TaxiState taxi, RandomStream& rng);

/// Number of moving steps needed to cover a path.
std::size_t moving_steps(double path_length_m, double step_distance_m);

/// Runway modeled as a FIFO queue served by the sum of two Bernoulli servers.
/// Queue entries are aircraft handles owned by the caller.
struct RunwayServer {
  double p1 = 0.0;
  double p2 = 0.0;
  std::deque<std::size_t> queue;
};

/// Serves one step: draws b1 ~ Bernoulli(p1) and b2 ~ Bernoulli(p2) (always
/// both) and removes min(b1 + b2, queue length) aircraft from the head.
/// Returned handles are in take-off order.
std::vector<std::size_t> runway_service(RunwayServer& server, RandomStream& rng);

/// The raw per-step capacity draw, b1 + b2.
int runway_capacity_draw(const RunwayServer& server, RandomStream& rng);

}  // namespace cvq::airside
