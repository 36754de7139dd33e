#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/random.hpp"
#include "core/types.hpp"

namespace cvq::traffic {

struct FleetClass {
  double share = 0.0;
  int avg_seats = 0;
};

/// Weight-class shares and average seats, indexed by WeightClass.
struct FleetMix {
  std::array<FleetClass, kWeightClassCount> classes{};

  /// Boston Logan departure mix: Heavy 16.73% / 214 seats, Large 77.21% / 97,
  /// Small 6.06% / 4.
  static FleetMix logan();

  [[nodiscard]] int passengers(WeightClass c) const { return classes[class_index(c)].avg_seats; }
  /// Throws ConfigError unless shares are non-negative and sum to 1 within 1e-9.
  void validate() const;
};

enum class DistributionMode { Monopoly, Top5, Top10, Custom };

struct AirlineShare {
  std::string airline;
  double share = 0.0;
};

struct AirlineDistribution {
  DistributionMode mode = DistributionMode::Top10;
  std::vector<AirlineShare> shares;

  void validate() const;
};

/// Published departure shares of the ten busiest airlines (codes AA..AJ).
std::span<const AirlineShare> logan_top_airlines();

/// monopoly: AA with share 1. top5/top10: the first k published shares with
/// the residual mass spread proportionally, i.e. renormalized to sum 1.
/// custom: `custom` renormalized; throws InputError when it cannot be.
AirlineDistribution make_airline_distribution(DistributionMode mode, std::span<const AirlineShare> custom = {});

/// Reads `<airline> <share>` lines (shares need not be normalized).
AirlineDistribution load_airline_distribution(const std::filesystem::path& path);

std::string to_string(DistributionMode mode);
DistributionMode parse_distribution_mode(const std::string& text);

struct Flight {
  FlightId id = 0;
  std::string airline;
  WeightClass weight_class = WeightClass::Large;
  int passengers = 0;
  NodeId gate = 0;
  Step ready_step = 0;

  bool operator==(const Flight&) const = default;
};

/// Flights sorted by ready step (stable with respect to input order).
struct Schedule {
  std::vector<Flight> flights;

  [[nodiscard]] bool empty() const { return flights.empty(); }
  [[nodiscard]] std::size_t size() const { return flights.size(); }
  bool operator==(const Schedule&) const = default;
};

struct LoadedSchedule {
  Schedule schedule;
  std::vector<std::string> warnings;
};

/// Parses `flight <id> <airline> <H|L|S> <gate_node> <ready_minute>` lines.
/// Ready minutes are rounded to the nearest step. Out-of-order records are
/// re-sorted with a warning. Parse errors name the line; validation errors
/// (unknown class, negative time, unknown gate, duplicate id) list every
/// offending line. An empty `known_gates` skips the gate check.
LoadedSchedule parse_schedule(std::istream& in, const FleetMix& fleet, std::span<const NodeId> known_gates,
                              double minutes_per_step, const std::string& source_name = "<schedule>");
LoadedSchedule load_schedule(const std::filesystem::path& path, const FleetMix& fleet,
                             std::span<const NodeId> known_gates, double minutes_per_step);

void write_schedule(const Schedule& schedule, std::ostream& out, double minutes_per_step);

struct SynthesisInputs {
  std::size_t n_flights = 0;
  std::vector<double> hourly_profile;  // relative ready-rate weight per hour
  FleetMix fleet;
  AirlineDistribution airlines;
  std::vector<NodeId> gates;
  Step steps_per_hour = 120;
};

/// Draws ready times from the piecewise-constant hourly rate profile, and
/// weight class, airline and gate independently per flight. Each flight
/// consumes exactly five draws, so changing the airline distribution leaves
/// ready times, classes and gates unchanged for a given stream.
Schedule synth_schedule(const SynthesisInputs& inputs, RandomStream& rng);

}  // namespace cvq::traffic
