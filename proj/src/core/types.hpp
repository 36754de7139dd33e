#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace cvq {

/// Simulation time is an integer count of fixed-length steps.
using Step = std::int64_t;

using NodeId = std::int64_t;
using FlightId = std::uint64_t;
using AirlineIndex = std::uint32_t;
using RunwayIndex = std::uint32_t;

enum class WeightClass : std::uint8_t { Heavy = 0, Large = 1, Small = 2 };

inline constexpr std::size_t kWeightClassCount = 3;

constexpr char class_code(WeightClass c) {
  switch (c) {
    case WeightClass::Heavy: return 'H';
    case WeightClass::Large: return 'L';
    case WeightClass::Small: return 'S';
  }
  return '?';
}

constexpr std::string_view class_name(WeightClass c) {
  switch (c) {
    case WeightClass::Heavy: return "heavy";
    case WeightClass::Large: return "large";
    case WeightClass::Small: return "small";
  }
  return "unknown";
}

constexpr std::optional<WeightClass> parse_class_code(std::string_view s) {
  if (s == "H") return WeightClass::Heavy;
  if (s == "L") return WeightClass::Large;
  if (s == "S") return WeightClass::Small;
  return std::nullopt;
}

constexpr std::size_t class_index(WeightClass c) { return static_cast<std::size_t>(c); }

inline constexpr WeightClass kAllClasses[kWeightClassCount] = {
    WeightClass::Heavy, WeightClass::Large, WeightClass::Small};

/// Wall-clock view of the step counter.
struct SimClock {
  Step step_index = 0;
  int step_seconds = 30;

  [[nodiscard]] std::int64_t wall_seconds() const { return step_index * step_seconds; }
  [[nodiscard]] double minutes_per_step() const { return step_seconds / 60.0; }
};

}  // namespace cvq
