#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "sim/simulator.hpp"
#include "traffic/traffic.hpp"

namespace cvq::harness {

/// Raw key/value configuration (INI sections map to dotted keys such as
/// `cvq.load_limit`). Relative paths resolve against `base_dir`.
struct ConfigTree {
  boost::property_tree::ptree values;
  std::filesystem::path base_dir;
  std::string source = "<config>";
};

ConfigTree read_config_tree(const std::filesystem::path& path);
ConfigTree parse_config_tree(const std::string& text, const std::filesystem::path& base_dir);
void set_value(ConfigTree& tree, const std::string& key, const std::string& value);

struct TrafficSettings {
  std::string distribution = "top10";  // monopoly | top5 | top10 | custom:<path>
  traffic::AirlineDistribution airlines;
  std::size_t n_flights = 0;
  std::vector<double> rate_profile;
  traffic::FleetMix fleet = traffic::FleetMix::logan();
  std::optional<traffic::Schedule> fixed_schedule;
};

/// Fully resolved and validated experiment configuration.
struct ExperimentConfig {
  sim::SimConfig sim;
  std::filesystem::path lattice_path;
  TrafficSettings traffic;
  std::uint64_t master_seed = 1;
  std::uint32_t n_days = 64;
  std::vector<double> alpha_grid;
  int congestion_threshold = 9;
  /// Every effective setting as `key = value` lines, sorted by key.
  std::string canonical;
};

/// Applies defaults, loads referenced files and validates. Throws ConfigError
/// (or InputError/IoError for referenced files).
ExperimentConfig resolve(const ConfigTree& tree);
ExperimentConfig load_config(const std::filesystem::path& path);

/// `start:step:end` (inclusive) or a comma-separated list. Every value must
/// lie in [0, 1].
std::vector<double> parse_alpha_grid(const std::string& text);

/// Resolves `monopoly|top5|top10|custom:<path>`.
traffic::AirlineDistribution resolve_distribution(const std::string& spec, const std::filesystem::path& base_dir);

/// FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace cvq::harness
