#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace cvq::sim {

/// Per-aircraft event log entry. All times are step indices.
struct FlightRecord {
  FlightId id = 0;
  std::string airline;
  WeightClass weight_class = WeightClass::Large;
  int passengers = 0;
  NodeId gate = 0;
  RunwayIndex runway = 0;
  Step ready_step = 0;
  Step pushback_step = 0;
  Step queue_entry_step = 0;
  Step wheelsoff_step = 0;
  int planes_out_at_pushback = 0;  // excluding the aircraft itself
  int active_planes_at_ready = 0;  // held + taxiing + queued, excluding itself

  bool operator==(const FlightRecord&) const = default;
};

/// Per-step, per-runway counters. `planes_out` is sampled right after the
/// step's push-back releases, which is the step's peak.
struct StepRecord {
  Step step = 0;
  std::vector<int> planes_out;
  std::vector<int> takeoffs;

  bool operator==(const StepRecord&) const = default;
};

struct DayTrace {
  int step_seconds = 30;
  std::vector<FlightRecord> flights;  // schedule order
  std::vector<StepRecord> steps;

  [[nodiscard]] double minutes_per_step() const { return step_seconds / 60.0; }
  bool operator==(const DayTrace&) const = default;
};

/// Flight records as CSV (header + one row per flight).
void write_flight_csv(const DayTrace& trace, std::ostream& out);
void write_step_csv(const DayTrace& trace, std::ostream& out);
/// Reads flight records written by write_flight_csv. Step records are left empty.
DayTrace read_flight_csv(std::istream& in, int step_seconds, const std::string& source_name = "<trace>");
DayTrace load_flight_csv(const std::filesystem::path& path, int step_seconds);

}  // namespace cvq::sim
