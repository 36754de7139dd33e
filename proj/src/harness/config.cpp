#include "harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "core/errors.hpp"

namespace cvq::harness {

namespace pt = boost::property_tree;

namespace {

// Demand weight per hour of day: quiet night, morning and evening banks.
constexpr double kDefaultProfile[24] = {0, 0, 0, 0, 0, 0.5, 3, 5, 5, 4, 3, 3,
                                        3, 3, 3.5, 4, 5, 5, 4, 3, 2, 1, 0, 0};

// Output of `calibrate` on data/calibration.
constexpr double kDefaultP1 = 0.2022788363;
constexpr double kDefaultP2 = 0.1177211637;
constexpr double kDefaultStop = 0.3021151941;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigTree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    known_.insert(key);
    if (auto v = tree_.values.get_optional<std::string>(key)) {
      auto t = trim(*v);
      if (!t.empty()) return t;
    }
    return std::nullopt;
  }
  double number(const std::string& key, double fallback) {
    const auto v = raw(key);
    const double out = v ? to_double(key, *v) : fallback;
    canonical_[key] = format_double(out);
    return out;
  }
  long long integer(const std::string& key, long long fallback) {
    const auto v = raw(key);
    const long long out = v ? to_integer(key, *v) : fallback;
    canonical_[key] = std::to_string(out);
    return out;
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    std::uint64_t out = fallback;
    if (const auto v = raw(key)) {
      try {
        std::size_t used = 0;
        if (v->front() == '-') throw std::invalid_argument(*v);
        out = std::stoull(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
      } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + *v + "'");
      }
    }
    canonical_[key] = std::to_string(out);
    return out;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    auto out = raw(key).value_or(fallback);
    canonical_[key] = out;
    return out;
  }
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const auto v = raw(key);
    auto out = v ? to_doubles(key, *v) : fallback;
    canonical_[key] = join(out);
    return out;
  }
  void record(const std::string& key, const std::string& value) { canonical_[key] = value; }
  std::filesystem::path path(const std::string& rel) const {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : tree_.base_dir / p;
  }
  /// Every key in the file must have been consulted; anything else is a typo.
  void reject_unknown() const {
    for (const auto& [section, children] : tree_.values) {
      if (children.empty() && !children.data().empty()) {
        throw ConfigError(tree_.source + ": setting '" + section + "' is outside any [section]");
      }
      for (const auto& [name, value] : children) {
        const auto key = section + "." + name;
        if (!known_.contains(key)) throw ConfigError(tree_.source + ": unknown setting '" + key + "'");
      }
    }
  }
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : canonical_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  const ConfigTree& tree_;
  std::map<std::string, std::string> canonical_;
  mutable std::set<std::string> known_;
};

}  // namespace

ConfigTree read_config_tree(const std::filesystem::path& path) {
  ConfigTree tree;
  try {
    pt::read_ini(path.string(), tree.values);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  tree.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  tree.source = path.string();
  return tree;
}

ConfigTree parse_config_tree(const std::string& text, const std::filesystem::path& base_dir) {
  ConfigTree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree.values);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  tree.base_dir = base_dir;
  return tree;
}

void set_value(ConfigTree& tree, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
    throw ConfigError("configuration keys have the form <section>.<name>, got '" + key + "'");
  }
  tree.values.put(key, value);
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> grid;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double start = to_double("sweep.alpha_grid", parts[0]);
    const double step = to_double("sweep.alpha_grid", parts[1]);
    const double end = to_double("sweep.alpha_grid", parts[2]);
    if (!(step > 0.0) || end < start) throw ConfigError("sweep.alpha_grid: expected start:step:end with step > 0");
    const auto n = static_cast<long long>(std::floor((end - start) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) {
      // Snap to 1e-12 so 0.15 is 0.15 and not 0.15000000000000002.
      grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else if (parts.size() == 1) {
    grid = to_doubles("sweep.alpha_grid", text);
  } else {
    throw ConfigError("sweep.alpha_grid: expected start:step:end or a comma-separated list");
  }
  if (grid.empty()) throw ConfigError("sweep.alpha_grid is empty");
  for (double a : grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("sweep.alpha_grid values must lie in [0, 1]");
  }
  return grid;
}

traffic::AirlineDistribution resolve_distribution(const std::string& spec, const std::filesystem::path& base_dir) {
  if (spec.rfind("custom:", 0) == 0) {
    std::filesystem::path p(spec.substr(7));
    if (p.empty()) throw ConfigError("custom distribution needs a path: custom:<path>");
    return traffic::load_airline_distribution(p.is_absolute() ? p : base_dir / p);
  }
  const auto mode = traffic::parse_distribution_mode(spec);
  if (mode == traffic::DistributionMode::Custom) throw ConfigError("custom distribution needs a path: custom:<path>");
  return traffic::make_airline_distribution(mode);
}

ExperimentConfig resolve(const ConfigTree& tree) {
  Reader r(tree);
  ExperimentConfig cfg;

  cfg.sim.step_seconds = static_cast<int>(r.integer("sim.step_seconds", 30));
  if (cfg.sim.step_seconds <= 0) throw ConfigError("sim.step_seconds must be positive");
  cfg.sim.max_extension_steps = r.integer("sim.max_extension_steps", 20000);
  const double minutes_per_step = cfg.sim.step_seconds / 60.0;

  const auto lattice = r.raw("lattice.path");
  if (!lattice) throw ConfigError("lattice.path is required");
  cfg.lattice_path = r.path(*lattice);
  r.record("lattice.path", *lattice);
  cfg.sim.graph = std::make_shared<airside::TaxiwayGraph>(airside::load_lattice(cfg.lattice_path));

  std::vector<double> default_thresholds;
  for (NodeId t : cfg.sim.graph->thresholds()) default_thresholds.push_back(static_cast<double>(t));
  const auto thresholds = r.numbers("runway.thresholds", default_thresholds);
  const auto p1 = r.numbers("runway.p1", {kDefaultP1});
  const auto p2 = r.numbers("runway.p2", {kDefaultP2});
  if (thresholds.empty()) throw ConfigError("no runway thresholds configured");
  if (p1.size() != thresholds.size() || p2.size() != thresholds.size()) {
    throw ConfigError("runway.p1 and runway.p2 need one value per runway threshold");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] != std::floor(thresholds[i])) throw ConfigError("runway.thresholds must be node ids");
    const auto node = static_cast<NodeId>(thresholds[i]);
    if (cfg.sim.graph->has_node(node) && !cfg.sim.graph->node(node).threshold) {
      throw ConfigError("node " + std::to_string(node) + " is not labeled as a threshold in the lattice");
    }
    cfg.sim.runways.push_back({node, p1[i], p2[i]});
  }

  cfg.sim.taxi.p_stop = r.number("taxi.p_stop", kDefaultStop);
  cfg.sim.taxi.step_distance_m = r.number("taxi.step_distance", 300.0);
  cfg.sim.load_limit = static_cast<int>(r.integer("cvq.load_limit", 9));
  cfg.sim.policy.alpha = r.number("policy.alpha", 0.0);
  cfg.sim.policy.w1 = r.number("policy.w1", 4.0);
  cfg.sim.policy.w2 = r.number("policy.w2", 1.0);
  sim::validate(cfg.sim);

  auto& fleet = cfg.traffic.fleet;
  for (auto c : kAllClasses) {
    const std::string name(class_name(c));
    auto& fc = fleet.classes[class_index(c)];
    fc.share = r.number("fleet." + name + "_share", fc.share);
    const auto seats = r.integer("fleet." + name + "_seats", fc.avg_seats);
    if (seats < 0) throw ConfigError("fleet." + name + "_seats must be non-negative");
    fc.avg_seats = static_cast<int>(seats);
  }
  fleet.validate();

  cfg.traffic.distribution = r.text("traffic.mode", "top10");
  cfg.traffic.airlines = resolve_distribution(cfg.traffic.distribution, tree.base_dir);
  const auto n_flights = r.integer("traffic.n_flights", 530);
  if (n_flights < 0) throw ConfigError("traffic.n_flights must be >= 0");
  cfg.traffic.n_flights = static_cast<std::size_t>(n_flights);
  cfg.traffic.rate_profile = r.numbers("traffic.rate_profile", {std::begin(kDefaultProfile), std::end(kDefaultProfile)});
  if (cfg.traffic.rate_profile.size() != 24) throw ConfigError("traffic.rate_profile needs 24 hourly weights");
  double profile_total = 0.0;
  for (double w : cfg.traffic.rate_profile) {
    if (w < 0.0) throw ConfigError("traffic.rate_profile weights must be non-negative");
    profile_total += w;
  }
  if (profile_total <= 0.0 && cfg.traffic.n_flights > 0) throw ConfigError("traffic.rate_profile is all zero");
  if (const auto sched = r.raw("traffic.schedule")) {
    r.record("traffic.schedule", *sched);
    const auto gates = cfg.sim.graph->gates();
    cfg.traffic.fixed_schedule = traffic::load_schedule(r.path(*sched), fleet, gates, minutes_per_step).schedule;
  }

  cfg.master_seed = r.unsigned_integer("seeds.master_seed", 2008);
  const auto days = r.integer("seeds.n_days", 64);
  if (days < 1) throw ConfigError("seeds.n_days must be >= 1");
  cfg.n_days = static_cast<std::uint32_t>(days);
  cfg.alpha_grid = parse_alpha_grid(r.text("sweep.alpha_grid", "0:0.05:1"));
  cfg.congestion_threshold = static_cast<int>(r.integer("metrics.congestion_threshold", 9));

  r.reject_unknown();
  cfg.canonical = r.canonical();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return resolve(read_config_tree(path)); }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cvq::harness
