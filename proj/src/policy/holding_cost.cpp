#include "policy/holding_cost.hpp"

#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace cvq::policy {

void PolicyParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("policy.alpha must lie in [0, 1]");
  if (!(w1 > 0.0) || !std::isfinite(w1)) throw ConfigError("policy.w1 must be positive");
  if (!(w2 > 0.0) || !std::isfinite(w2)) throw ConfigError("policy.w2 must be positive");
}

double holding_cost(const HoldingCostInputs& inputs, const PolicyParams& params) {
  return params.w1 * inputs.time_since_ready_min * (1.0 - params.alpha) +
         params.w2 * inputs.passengers * params.alpha;
}

std::size_t select_pushback(std::span<const HeldAircraft> held, const PolicyParams& params, Step now,
                            double minutes_per_step) {
  if (held.empty()) throw std::logic_error("select_pushback: airline received a clearance with no held aircraft");
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < held.size(); ++i) {
    const auto& a = held[i];
    const double cost = holding_cost(
        {static_cast<double>(now - a.ready_step) * minutes_per_step, static_cast<double>(a.passengers)}, params);
    if (i == 0) {
      best_cost = cost;
      continue;
    }
    const auto& b = held[best];
    const bool better = cost > best_cost ||
                        (cost == best_cost && (a.ready_step < b.ready_step ||
                                               (a.ready_step == b.ready_step && a.id < b.id)));
    if (better) {
      best = i;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace cvq::policy
