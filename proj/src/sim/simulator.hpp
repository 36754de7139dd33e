#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "airside/motion.hpp"
#include "airside/taxiway_graph.hpp"
#include "core/random.hpp"
#include "core/types.hpp"
#include "cvq/virtual_queue.hpp"
#include "policy/holding_cost.hpp"
#include "sim/trace.hpp"
#include "traffic/traffic.hpp"

namespace cvq::sim {

struct RunwayConfig {
  NodeId threshold = 0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct TaxiConfig {
  double p_stop = 0.0;
  double step_distance_m = 300.0;
};

/// Everything a single simulated day needs besides the schedule and seed.
struct SimConfig {
  std::shared_ptr<const airside::TaxiwayGraph> graph;
  std::vector<RunwayConfig> runways;
  int load_limit = 9;  // 0 disables gate holding
  policy::PolicyParams policy;
  TaxiConfig taxi;
  int step_seconds = 30;
  /// Steps allowed past the last ready time for the system to drain.
  Step max_extension_steps = 20000;
};

/// Throws ConfigError on invalid probabilities, distances, runways, or a gate
/// that cannot reach every runway threshold.
void validate(const SimConfig& config);

enum class Phase : std::uint8_t { Scheduled, Held, Taxiing, RunwayQueue, Departed };

struct AircraftState {
  traffic::Flight flight;
  AirlineIndex airline = 0;
  Phase phase = Phase::Scheduled;
  RunwayIndex runway = 0;
  Step pushback_step = -1;
  Step queue_entry_step = -1;
  Step wheelsoff_step = -1;
  int planes_out_at_pushback = 0;
  int active_planes_at_ready = 0;
  airside::TaxiState taxi;
  std::optional<RandomStream> taxi_rng;
};

struct SimState {
  SimClock clock;
  std::uint64_t seed = 0;
  std::vector<AircraftState> aircraft;  // schedule order
  std::vector<std::string> airlines;    // AirlineIndex -> code
  std::size_t next_ready = 0;
  std::vector<std::vector<std::size_t>> held;  // per airline
  std::size_t held_count = 0;
  queue::VirtualQueue cvq;
  std::vector<std::size_t> taxiing;  // push-back order
  std::vector<airside::RunwayServer> runways;
  std::vector<RandomStream> runway_rng;
  std::vector<std::size_t> departed;
  std::vector<StepRecord> step_log;

  [[nodiscard]] bool finished() const { return departed.size() == aircraft.size(); }
};

/// Aircraft taxiing toward `runway` plus those queued at it.
int count_planes_out(const SimState& state, RunwayIndex runway);
std::vector<int> planes_out_by_runway(const SimState& state);
/// Aircraft between ready and wheels-off, including those held at the gate.
int active_planes(const SimState& state);

/// Throws std::logic_error when phase bookkeeping or timestamp ordering is violated.
void check_invariants(const SimState& state);

/// Time-driven departure simulator. Construction validates the configuration
/// and precomputes every gate-to-threshold path; the object is immutable
/// afterwards and may be shared between threads.
class Simulator {
 public:
  explicit Simulator(SimConfig config);

  /// Throws InputError if the schedule references unknown gates or is unsorted.
  [[nodiscard]] SimState initial_state(const traffic::Schedule& schedule, std::uint64_t seed) const;

  /// Advances one step: ready aircraft enter the virtual queue, releases are
  /// granted, taxiing aircraft move, arrivals join runway queues, runways
  /// serve, and the clock advances.
  void step(SimState& state) const;

  /// Runs until every scheduled aircraft has departed.
  [[nodiscard]] DayTrace run_day(const traffic::Schedule& schedule, std::uint64_t seed) const;

  [[nodiscard]] DayTrace trace_of(const SimState& state) const;
  [[nodiscard]] const SimConfig& config() const { return config_; }
  [[nodiscard]] const airside::TaxiPath& path(NodeId gate, RunwayIndex runway) const;

 private:
  void admit_ready(SimState& state) const;
  void release_pushbacks(SimState& state) const;
  void advance_taxiing(SimState& state) const;
  void serve_runways(SimState& state, std::vector<int>& takeoffs) const;

  SimConfig config_;
  std::map<std::pair<NodeId, RunwayIndex>, airside::TaxiPath> paths_;
};

DayTrace run_day(const SimConfig& config, const traffic::Schedule& schedule, std::uint64_t seed);

}  // namespace cvq::sim
