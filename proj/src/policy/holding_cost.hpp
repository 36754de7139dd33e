#pragma once

#include <cstddef>
#include <span>

#include "core/types.hpp"

namespace cvq::policy {

/// Weights of the tunable push-back cost. alpha = 0 is first-come-first-served,
/// alpha = 1 is heaviest-plane-first.
struct PolicyParams {
  double alpha = 0.0;
  double w1 = 4.0;
  double w2 = 1.0;

  /// Throws ConfigError unless alpha is in [0, 1] and both weights are positive.
  void validate() const;
};

struct HoldingCostInputs {
  double time_since_ready_min = 0.0;
  double passengers = 0.0;
};

/// w1 * time_since_ready * (1 - alpha) + w2 * passengers * alpha
double holding_cost(const HoldingCostInputs& inputs, const PolicyParams& params);

/// What the airline knows about one of its held aircraft.
struct HeldAircraft {
  FlightId id = 0;
  Step ready_step = 0;
  int passengers = 0;
};

/// Picks the held aircraft with the highest holding cost; ties go to the
/// earliest ready step, then the smallest id. Returns its index in `held`.
/// Throws std::logic_error on an empty set.
std::size_t select_pushback(std::span<const HeldAircraft> held, const PolicyParams& params, Step now,
                            double minutes_per_step);

}  // namespace cvq::policy
