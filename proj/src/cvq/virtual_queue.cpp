#include "cvq/virtual_queue.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "core/errors.hpp"

namespace cvq::queue {

VirtualQueue::VirtualQueue(int load_limit) : load_limit_(load_limit) {
  if (load_limit < 0) throw ConfigError("cvq.load_limit must be >= 0 (0 disables the virtual queue)");
}

const VirtualPlane& VirtualQueue::enqueue_virtual(AirlineIndex airline, Step now) {
  VirtualPlane vp{airline, now, next_sequence_++};
  // Ready events arrive in time order, so this is an append in practice.
  auto pos = std::upper_bound(planes_.begin(), planes_.end(), vp, [](const VirtualPlane& a, const VirtualPlane& b) {
    return a.virtual_pushback_step < b.virtual_pushback_step;
  });
  return *planes_.insert(pos, vp);
}

std::optional<AirlineIndex> VirtualQueue::release_eligible(std::span<const int> planes_out) {
  if (planes_.empty()) return std::nullopt;
  if (gating_enabled()) {
    const int total = std::accumulate(planes_out.begin(), planes_out.end(), 0);
    if (total >= load_limit_) return std::nullopt;
  }
  const AirlineIndex airline = planes_.front().airline;
  planes_.pop_front();
  return airline;
}

RunwayIndex assign_runway(std::span<const int> planes_out) {
  if (planes_out.empty()) throw std::logic_error("assign_runway: no runways configured");
  const auto best = std::min_element(planes_out.begin(), planes_out.end());
  return static_cast<RunwayIndex>(std::distance(planes_out.begin(), best));
}

}  // namespace cvq::queue
