#include "traffic/traffic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"

namespace cvq::traffic {

namespace {

const AirlineShare kLoganTop[] = {
    {"AA", 0.1060}, {"AB", 0.0927}, {"AC", 0.0904}, {"AD", 0.0895}, {"AE", 0.0814},
    {"AF", 0.0677}, {"AG", 0.0593}, {"AH", 0.0587}, {"AI", 0.0587}, {"AJ", 0.0373},
};

std::vector<AirlineShare> renormalized(std::span<const AirlineShare> raw) {
  double total = 0.0;
  for (const auto& s : raw) {
    if (!(s.share >= 0.0) || !std::isfinite(s.share)) {
      throw InputError("airline share for '" + s.airline + "' must be a non-negative number");
    }
    total += s.share;
  }
  if (!(total > 0.0)) throw InputError("airline shares sum to zero and cannot be normalized");
  std::vector<AirlineShare> out(raw.begin(), raw.end());
  for (auto& s : out) s.share /= total;
  return out;
}

bool valid_airline_code(const std::string& code) {
  return !code.empty() && std::all_of(code.begin(), code.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

}  // namespace

FleetMix FleetMix::logan() {
  FleetMix mix;
  mix.classes[class_index(WeightClass::Heavy)] = {0.1673, 214};
  mix.classes[class_index(WeightClass::Large)] = {0.7721, 97};
  mix.classes[class_index(WeightClass::Small)] = {0.0606, 4};
  return mix;
}

void FleetMix::validate() const {
  double total = 0.0;
  for (const auto& c : classes) {
    if (!(c.share >= 0.0)) throw ConfigError("fleet shares must be non-negative");
    if (c.avg_seats < 0) throw ConfigError("fleet average seats must be non-negative");
    total += c.share;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("fleet shares must sum to 1");
}

void AirlineDistribution::validate() const {
  if (shares.empty()) throw ConfigError("airline distribution is empty");
  double total = 0.0;
  for (const auto& s : shares) {
    if (!(s.share >= 0.0)) throw ConfigError("airline shares must be non-negative");
    total += s.share;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("airline shares must sum to 1");
}

std::span<const AirlineShare> logan_top_airlines() { return kLoganTop; }

AirlineDistribution make_airline_distribution(DistributionMode mode, std::span<const AirlineShare> custom) {
  AirlineDistribution dist;
  dist.mode = mode;
  switch (mode) {
    case DistributionMode::Monopoly:
      dist.shares = {{"AA", 1.0}};
      break;
    case DistributionMode::Top5:
      dist.shares = renormalized(std::span(kLoganTop).first(5));
      break;
    case DistributionMode::Top10:
      dist.shares = renormalized(kLoganTop);
      break;
    case DistributionMode::Custom: {
      if (custom.empty()) throw InputError("custom airline distribution has no entries");
      std::set<std::string> seen;
      for (const auto& s : custom) {
        if (!valid_airline_code(s.airline)) throw InputError("invalid airline code '" + s.airline + "'");
        if (!seen.insert(s.airline).second) throw InputError("airline '" + s.airline + "' listed twice");
      }
      dist.shares = renormalized(custom);
      break;
    }
  }
  return dist;
}

AirlineDistribution load_airline_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open airline distribution file " + path.string());
  std::vector<AirlineShare> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    AirlineShare s;
    if (!(fields >> s.airline)) continue;
    std::string extra;
    if (!(fields >> s.share) || (fields >> extra)) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected: <airline> <share>");
    }
    raw.push_back(s);
  }
  return make_airline_distribution(DistributionMode::Custom, raw);
}

std::string to_string(DistributionMode mode) {
  switch (mode) {
    case DistributionMode::Monopoly: return "monopoly";
    case DistributionMode::Top5: return "top5";
    case DistributionMode::Top10: return "top10";
    case DistributionMode::Custom: return "custom";
  }
  return "unknown";
}

DistributionMode parse_distribution_mode(const std::string& text) {
  if (text == "monopoly") return DistributionMode::Monopoly;
  if (text == "top5") return DistributionMode::Top5;
  if (text == "top10") return DistributionMode::Top10;
  if (text == "custom") return DistributionMode::Custom;
  throw ConfigError("unknown airline distribution mode '" + text + "' (monopoly|top5|top10|custom)");
}

LoadedSchedule parse_schedule(std::istream& in, const FleetMix& fleet, std::span<const NodeId> known_gates,
                              double minutes_per_step, const std::string& source_name) {
  LoadedSchedule result;
  std::vector<std::string> problems;
  std::unordered_set<FlightId> ids;
  const std::set<NodeId> gates(known_gates.begin(), known_gates.end());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (keyword != "flight") throw InputError(where + ": unknown record '" + keyword + "'");
    Flight f;
    std::string cls;
    double ready_minute = 0.0;
    std::string extra;
    if (!(fields >> f.id >> f.airline >> cls >> f.gate >> ready_minute) || (fields >> extra)) {
      throw InputError(where + ": expected: flight <id> <airline> <H|L|S> <gate_node> <ready_minute>");
    }
    const auto wc = parse_class_code(cls);
    if (!wc) {
      problems.push_back(where + ": unknown weight class '" + cls + "'");
      continue;
    }
    if (!valid_airline_code(f.airline)) {
      problems.push_back(where + ": invalid airline code '" + f.airline + "'");
      continue;
    }
    if (!(ready_minute >= 0.0) || !std::isfinite(ready_minute)) {
      problems.push_back(where + ": negative or invalid ready time");
      continue;
    }
    if (!gates.empty() && !gates.contains(f.gate)) {
      problems.push_back(where + ": unknown gate node " + std::to_string(f.gate));
      continue;
    }
    if (!ids.insert(f.id).second) {
      problems.push_back(where + ": duplicate flight id " + std::to_string(f.id));
      continue;
    }
    f.weight_class = *wc;
    f.passengers = fleet.passengers(*wc);
    f.ready_step = static_cast<Step>(std::llround(ready_minute / minutes_per_step));
    result.schedule.flights.push_back(std::move(f));
  }
  if (!problems.empty()) {
    std::string message = "invalid schedule records:";
    for (const auto& p : problems) message += "\n  " + p;
    throw InputError(message);
  }
  auto& flights = result.schedule.flights;
  const auto by_ready = [](const Flight& a, const Flight& b) { return a.ready_step < b.ready_step; };
  if (!std::is_sorted(flights.begin(), flights.end(), by_ready)) {
    result.warnings.push_back(source_name + ": ready times out of order; records re-sorted");
    std::stable_sort(flights.begin(), flights.end(), by_ready);
  }
  return result;
}

LoadedSchedule load_schedule(const std::filesystem::path& path, const FleetMix& fleet,
                             std::span<const NodeId> known_gates, double minutes_per_step) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schedule file " + path.string());
  return parse_schedule(in, fleet, known_gates, minutes_per_step, path.string());
}

void write_schedule(const Schedule& schedule, std::ostream& out, double minutes_per_step) {
  std::ostringstream buf;
  buf << std::fixed << std::setprecision(3);
  for (const auto& f : schedule.flights) {
    buf << "flight " << f.id << ' ' << f.airline << ' ' << class_code(f.weight_class) << ' ' << f.gate << ' '
        << static_cast<double>(f.ready_step) * minutes_per_step << '\n';
  }
  out << buf.str();
}

Schedule synth_schedule(const SynthesisInputs& in, RandomStream& rng) {
  Schedule schedule;
  if (in.n_flights == 0) return schedule;
  if (in.hourly_profile.empty()) throw InputError("rate profile is empty");
  for (double w : in.hourly_profile) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("rate profile weights must be non-negative");
  }
  if (std::accumulate(in.hourly_profile.begin(), in.hourly_profile.end(), 0.0) <= 0.0) {
    throw InputError("rate profile is all zero but flights were requested");
  }
  if (in.gates.empty()) throw InputError("no gate nodes available for synthesized flights");
  in.fleet.validate();
  in.airlines.validate();

  std::array<double, kWeightClassCount> class_weights{};
  for (std::size_t c = 0; c < kWeightClassCount; ++c) class_weights[c] = in.fleet.classes[c].share;
  std::vector<double> airline_weights;
  for (const auto& s : in.airlines.shares) airline_weights.push_back(s.share);

  schedule.flights.reserve(in.n_flights);
  for (std::size_t i = 0; i < in.n_flights; ++i) {
    const auto hour = static_cast<Step>(rng.categorical(in.hourly_profile));
    const auto offset = static_cast<Step>(rng.below(static_cast<std::size_t>(in.steps_per_hour)));
    const auto cls = static_cast<WeightClass>(rng.categorical(class_weights));
    const auto airline = rng.categorical(airline_weights);
    const auto gate = rng.below(in.gates.size());
    Flight f;
    f.airline = in.airlines.shares[airline].airline;
    f.weight_class = cls;
    f.passengers = in.fleet.passengers(cls);
    f.gate = in.gates[gate];
    f.ready_step = hour * in.steps_per_hour + offset;
    schedule.flights.push_back(std::move(f));
  }
  std::stable_sort(schedule.flights.begin(), schedule.flights.end(),
                   [](const Flight& a, const Flight& b) { return a.ready_step < b.ready_step; });
  for (std::size_t i = 0; i < schedule.flights.size(); ++i) schedule.flights[i].id = i + 1;
  return schedule;
}

}  // namespace cvq::traffic
