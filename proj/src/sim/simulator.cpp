#include "sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "core/errors.hpp"

namespace cvq::sim {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void validate(const SimConfig& config) {
  if (!config.graph) throw ConfigError("no taxiway lattice loaded");
  if (config.step_seconds <= 0) throw ConfigError("sim.step_seconds must be positive");
  if (config.load_limit < 0) throw ConfigError("cvq.load_limit must be >= 0 (0 disables the virtual queue)");
  config.policy.validate();
  if (!(config.taxi.step_distance_m > 0.0) || !std::isfinite(config.taxi.step_distance_m)) {
    throw ConfigError("taxi.step_distance must be positive");
  }
  if (!is_probability(config.taxi.p_stop) || config.taxi.p_stop >= 1.0) {
    throw ConfigError("taxi.p_stop must lie in [0, 1); p_stop = 1 never lets an aircraft move");
  }
  if (config.runways.empty()) throw ConfigError("at least one runway must be configured");
  for (const auto& r : config.runways) {
    if (!config.graph->has_node(r.threshold)) {
      throw ConfigError("runway threshold node " + std::to_string(r.threshold) + " is not in the lattice");
    }
    if (!is_probability(r.p1) || !is_probability(r.p2)) throw ConfigError("runway p1/p2 must lie in [0, 1]");
    if (r.p1 + r.p2 <= 0.0) throw ConfigError("runway p1 + p2 must be positive or no aircraft ever departs");
  }
  if (config.graph->gates().empty()) throw ConfigError("lattice has no gate nodes");
  if (config.max_extension_steps <= 0) throw ConfigError("max_extension_steps must be positive");
}

int count_planes_out(const SimState& state, RunwayIndex runway) {
  int taxiing = 0;
  for (auto idx : state.taxiing) {
    if (state.aircraft[idx].runway == runway) ++taxiing;
  }
  return taxiing + static_cast<int>(state.runways.at(runway).queue.size());
}

std::vector<int> planes_out_by_runway(const SimState& state) {
  std::vector<int> counts(state.runways.size(), 0);
  for (auto idx : state.taxiing) ++counts[state.aircraft[idx].runway];
  for (std::size_t r = 0; r < state.runways.size(); ++r) counts[r] += static_cast<int>(state.runways[r].queue.size());
  return counts;
}

int active_planes(const SimState& state) {
  const auto out = planes_out_by_runway(state);
  return static_cast<int>(state.held_count) + std::accumulate(out.begin(), out.end(), 0);
}

void check_invariants(const SimState& state) {
  const auto fail = [](const std::string& what) { throw std::logic_error("sim invariant violated: " + what); };
  std::vector<int> seen(state.aircraft.size(), 0);
  std::size_t held_total = 0;
  for (const auto& list : state.held) {
    for (auto idx : list) {
      ++seen[idx];
      if (state.aircraft[idx].phase != Phase::Held) fail("held list contains a non-held aircraft");
    }
    held_total += list.size();
  }
  if (held_total != state.held_count) fail("held count mismatch");
  for (auto idx : state.taxiing) {
    ++seen[idx];
    if (state.aircraft[idx].phase != Phase::Taxiing) fail("taxiing list contains a non-taxiing aircraft");
  }
  for (const auto& rw : state.runways) {
    for (auto idx : rw.queue) {
      ++seen[idx];
      if (state.aircraft[idx].phase != Phase::RunwayQueue) fail("runway queue contains a non-queued aircraft");
    }
  }
  for (auto idx : state.departed) {
    ++seen[idx];
    if (state.aircraft[idx].phase != Phase::Departed) fail("departed list contains a non-departed aircraft");
  }
  for (std::size_t i = 0; i < state.aircraft.size(); ++i) {
    const auto& a = state.aircraft[i];
    const int expected = a.phase == Phase::Scheduled ? 0 : 1;
    if (seen[i] != expected) fail("aircraft " + std::to_string(a.flight.id) + " is in " + std::to_string(seen[i]) + " phase sets");
    if ((a.phase == Phase::Scheduled) != (i >= state.next_ready)) fail("ready cursor disagrees with phases");
    if (a.phase >= Phase::Taxiing && a.pushback_step < a.flight.ready_step) fail("push-back before ready");
    if (a.phase >= Phase::RunwayQueue && a.queue_entry_step < a.pushback_step) fail("queue entry before push-back");
    if (a.phase == Phase::Departed && a.wheelsoff_step < a.queue_entry_step) fail("wheels-off before queue entry");
  }
  std::vector<std::size_t> vp_per_airline(state.held.size(), 0);
  for (const auto& vp : state.cvq.planes()) ++vp_per_airline.at(vp.airline);
  for (std::size_t a = 0; a < state.held.size(); ++a) {
    if (vp_per_airline[a] != state.held[a].size()) fail("virtual planes do not match held aircraft for an airline");
  }
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  validate(config_);
  for (NodeId gate : config_.graph->gates()) {
    for (RunwayIndex r = 0; r < config_.runways.size(); ++r) {
      paths_.emplace(std::make_pair(gate, r), airside::shortest_path(*config_.graph, gate, config_.runways[r].threshold));
    }
  }
}

const airside::TaxiPath& Simulator::path(NodeId gate, RunwayIndex runway) const {
  auto it = paths_.find({gate, runway});
  if (it == paths_.end()) throw InputError("node " + std::to_string(gate) + " is not a gate of the lattice");
  return it->second;
}

SimState Simulator::initial_state(const traffic::Schedule& schedule, std::uint64_t seed) const {
  SimState state;
  state.clock = {0, config_.step_seconds};
  state.seed = seed;
  state.cvq = queue::VirtualQueue(config_.load_limit);
  std::unordered_map<std::string, AirlineIndex> airline_index;
  Step previous = 0;
  state.aircraft.reserve(schedule.flights.size());
  for (const auto& f : schedule.flights) {
    if (f.ready_step < 0) throw InputError("flight " + std::to_string(f.id) + " has a negative ready time");
    if (f.ready_step < previous) throw InputError("schedule is not sorted by ready time");
    previous = f.ready_step;
    if (!paths_.contains({f.gate, 0})) {
      throw InputError("flight " + std::to_string(f.id) + " references unknown gate " + std::to_string(f.gate));
    }
    auto [it, inserted] = airline_index.try_emplace(f.airline, static_cast<AirlineIndex>(state.airlines.size()));
    if (inserted) state.airlines.push_back(f.airline);
    AircraftState a;
    a.flight = f;
    a.airline = it->second;
    state.aircraft.push_back(std::move(a));
  }
  state.held.resize(state.airlines.size());
  for (std::size_t r = 0; r < config_.runways.size(); ++r) {
    state.runways.push_back({config_.runways[r].p1, config_.runways[r].p2, {}});
    state.runway_rng.emplace_back(derive_seed(seed, "runway", r + 1));
  }
  return state;
}

void Simulator::admit_ready(SimState& state) const {
  const Step now = state.clock.step_index;
  while (state.next_ready < state.aircraft.size() && state.aircraft[state.next_ready].flight.ready_step <= now) {
    const std::size_t idx = state.next_ready++;
    auto& a = state.aircraft[idx];
    a.active_planes_at_ready = active_planes(state);
    a.phase = Phase::Held;
    state.cvq.enqueue_virtual(a.airline, now);
    state.held[a.airline].push_back(idx);
    ++state.held_count;
  }
}

void Simulator::release_pushbacks(SimState& state) const {
  const Step now = state.clock.step_index;
  auto counts = planes_out_by_runway(state);
  std::vector<policy::HeldAircraft> candidates;
  while (auto airline = state.cvq.release_eligible(counts)) {
    auto& held = state.held.at(*airline);
    candidates.clear();
    for (auto idx : held) {
      const auto& f = state.aircraft[idx].flight;
      candidates.push_back({f.id, f.ready_step, f.passengers});
    }
    const auto pick = policy::select_pushback(candidates, config_.policy, now, state.clock.minutes_per_step());
    const std::size_t idx = held[pick];
    held.erase(held.begin() + static_cast<std::ptrdiff_t>(pick));
    --state.held_count;

    auto& a = state.aircraft[idx];
    const RunwayIndex runway = queue::assign_runway(counts);
    a.phase = Phase::Taxiing;
    a.runway = runway;
    a.pushback_step = now;
    a.planes_out_at_pushback = std::accumulate(counts.begin(), counts.end(), 0);
    a.taxi = {path(a.flight.gate, runway).length_m, 0.0, config_.taxi.step_distance_m, config_.taxi.p_stop};
    a.taxi_rng.emplace(derive_seed(state.seed, "taxi", a.flight.id));
    state.taxiing.push_back(idx);
    ++counts[runway];
  }
}

void Simulator::advance_taxiing(SimState& state) const {
  const Step now = state.clock.step_index;
  // Aircraft released this step enter the taxiway now and first move next step.
  for (auto idx : state.taxiing) {
    auto& a = state.aircraft[idx];
    if (a.pushback_step < now) a.taxi = airside::advance_taxi(a.taxi, *a.taxi_rng);
  }
  std::vector<std::size_t> still_taxiing;
  still_taxiing.reserve(state.taxiing.size());
  for (auto idx : state.taxiing) {
    auto& a = state.aircraft[idx];
    if (a.taxi.arrived()) {
      a.phase = Phase::RunwayQueue;
      a.queue_entry_step = now;
      a.taxi_rng.reset();
      state.runways[a.runway].queue.push_back(idx);
    } else {
      still_taxiing.push_back(idx);
    }
  }
  state.taxiing = std::move(still_taxiing);
}

void Simulator::serve_runways(SimState& state, std::vector<int>& takeoffs) const {
  const Step now = state.clock.step_index;
  for (std::size_t r = 0; r < state.runways.size(); ++r) {
    const auto departing = airside::runway_service(state.runways[r], state.runway_rng[r]);
    takeoffs[r] = static_cast<int>(departing.size());
    for (auto idx : departing) {
      auto& a = state.aircraft[idx];
      a.phase = Phase::Departed;
      a.wheelsoff_step = now;
      state.departed.push_back(idx);
    }
  }
}

void Simulator::step(SimState& state) const {
  admit_ready(state);
  release_pushbacks(state);
  StepRecord record{state.clock.step_index, planes_out_by_runway(state), std::vector<int>(state.runways.size(), 0)};
  advance_taxiing(state);
  serve_runways(state, record.takeoffs);
  state.step_log.push_back(std::move(record));
  ++state.clock.step_index;
}

DayTrace Simulator::trace_of(const SimState& state) const {
  DayTrace trace;
  trace.step_seconds = config_.step_seconds;
  trace.flights.reserve(state.aircraft.size());
  for (const auto& a : state.aircraft) {
    FlightRecord f;
    f.id = a.flight.id;
    f.airline = a.flight.airline;
    f.weight_class = a.flight.weight_class;
    f.passengers = a.flight.passengers;
    f.gate = a.flight.gate;
    f.runway = a.runway;
    f.ready_step = a.flight.ready_step;
    f.pushback_step = a.pushback_step;
    f.queue_entry_step = a.queue_entry_step;
    f.wheelsoff_step = a.wheelsoff_step;
    f.planes_out_at_pushback = a.planes_out_at_pushback;
    f.active_planes_at_ready = a.active_planes_at_ready;
    trace.flights.push_back(std::move(f));
  }
  trace.steps = state.step_log;
  return trace;
}

DayTrace Simulator::run_day(const traffic::Schedule& schedule, std::uint64_t seed) const {
  SimState state = initial_state(schedule, seed);
  const Step last_ready = schedule.empty() ? 0 : schedule.flights.back().ready_step;
  const Step limit = last_ready + config_.max_extension_steps;
  while (!state.finished()) {
    if (state.clock.step_index > limit) {
      throw SimulationError("day did not drain within " + std::to_string(config_.max_extension_steps) +
                            " steps after the last ready time (" + std::to_string(state.departed.size()) + " of " +
                            std::to_string(state.aircraft.size()) + " departed)");
    }
    step(state);
  }
  return trace_of(state);
}

DayTrace run_day(const SimConfig& config, const traffic::Schedule& schedule, std::uint64_t seed) {
  return Simulator(config).run_day(schedule, seed);
}

}  // namespace cvq::sim
