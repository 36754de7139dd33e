#pragma once

#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>

#include "airside/taxiway_graph.hpp"
#include "sim/simulator.hpp"
#include "traffic/traffic.hpp"

namespace cvq::testing {

inline std::filesystem::path data_dir() { return CVQSIM_TEST_DATA_DIR; }

inline std::shared_ptr<const airside::TaxiwayGraph> graph_from(const std::string& text) {
  std::istringstream in(text);
  return std::make_shared<const airside::TaxiwayGraph>(airside::parse_lattice(in));
}

// gate 1 -> 2 -> 3 -> threshold 9, 300 m per edge.
inline std::shared_ptr<const airside::TaxiwayGraph> line_graph() {
  return graph_from(
      "node 1 0 0 gate\n"
      "node 2 300 0\n"
      "node 3 600 0\n"
      "node 9 900 0 threshold\n"
      "edge 1 2\nedge 2 3\nedge 3 9\n");
}

inline sim::SimConfig line_config(double p_stop = 0.0, double p1 = 1.0, double p2 = 0.0, int load_limit = 9) {
  sim::SimConfig c;
  c.graph = line_graph();
  c.runways = {{9, p1, p2}};
  c.load_limit = load_limit;
  c.taxi = {p_stop, 300.0};
  return c;
}

inline traffic::Flight flight(FlightId id, const std::string& airline, WeightClass cls, Step ready,
                              NodeId gate = 1) {
  const auto fleet = traffic::FleetMix::logan();
  return traffic::Flight{id, airline, cls, fleet.passengers(cls), gate, ready};
}

// Sample mean and standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <typename Range>
MeanSe mean_se(const Range& xs) {
  double n = 0, s = 0, ss = 0;
  for (double x : xs) {
    n += 1;
    s += x;
  }
  const double m = s / n;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace cvq::testing

#include <fstream>
#include <random>

namespace cvq::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("cvqsim_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Small config text over the bundled lattice, for fast harness tests.
inline std::string small_config(int days = 2, int flights = 120, const std::string& grid = "0,0.5,1") {
  return "[lattice]\npath = " + (data_dir() / "logan_rw9.lattice").string() +
         "\n[traffic]\nn_flights = " + std::to_string(flights) + "\nmode = top5\n[seeds]\nmaster_seed = 11\nn_days = " +
         std::to_string(days) + "\n[sweep]\nalpha_grid = " + grid + "\n";
}

}  // namespace cvq::testing
