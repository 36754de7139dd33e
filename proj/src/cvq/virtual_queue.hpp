#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>

#include "core/types.hpp"

namespace cvq::queue {

/// A floating push-back clearance slot owned by an airline.
struct VirtualPlane {
  AirlineIndex airline = 0;
  Step virtual_pushback_step = 0;
  std::uint64_t sequence_id = 0;
};

/// Collaborative virtual queue. Holds one virtual plane per ready aircraft and
/// turns the oldest one into a push-back clearance while the number of planes
/// out is below the load limit.
class VirtualQueue {
 public:
  /// A load limit of 0 disables gating (infinite limit).
  explicit VirtualQueue(int load_limit = 9);

  const VirtualPlane& enqueue_virtual(AirlineIndex airline, Step now);

  /// Pops the oldest virtual plane and returns its airline when the total of
  /// `planes_out` is strictly below the load limit. The caller must count the
  /// released aircraft into `planes_out` before calling again within the same
  /// step.
  std::optional<AirlineIndex> release_eligible(std::span<const int> planes_out);

  [[nodiscard]] bool empty() const { return planes_.empty(); }
  [[nodiscard]] std::size_t size() const { return planes_.size(); }
  [[nodiscard]] const VirtualPlane& front() const { return planes_.front(); }
  [[nodiscard]] const std::deque<VirtualPlane>& planes() const { return planes_; }
  [[nodiscard]] int load_limit() const { return load_limit_; }
  [[nodiscard]] bool gating_enabled() const { return load_limit_ > 0; }

 private:
  std::deque<VirtualPlane> planes_;
  std::uint64_t next_sequence_ = 0;
  int load_limit_;
};

/// Runway with the fewest planes out; ties go to the smallest index.
RunwayIndex assign_runway(std::span<const int> planes_out);

}  // namespace cvq::queue
