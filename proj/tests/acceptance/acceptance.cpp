// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "airside/motion.hpp"
#include "airside/taxiway_graph.hpp"
#include "calibrate/calibrate.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "helpers.hpp"
#include "metrics/metrics.hpp"
#include "policy/holding_cost.hpp"

namespace fs = std::filesystem;
using namespace cvq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

harness::ExperimentConfig default_config(const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  auto tree = harness::read_config_tree(testing::data_dir() / "default.ini");
  for (const auto& [k, v] : overrides) harness::set_value(tree, k, v);
  return harness::resolve(tree);
}

std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

// Spearman rank correlation (Pearson correlation of average ranks).
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

const metrics::SweepPoint& point_at(const harness::SweepResult& r, double alpha) {
  for (const auto& p : r.points)
    if (std::abs(p.alpha - alpha) < 1e-12) return p;
  throw std::runtime_error("alpha not in sweep");
}

// Shared sweeps, computed once.
struct Sweeps {
  harness::SweepResult top10;
  harness::SweepResult three;
  harness::SweepResult monopoly;
};

Sweeps& sweeps() {
  static Sweeps s = [] {
    Sweeps out;
    out.top10 = harness::sweep_alpha(default_config(), {0, false});
    out.three = harness::sweep_alpha(default_config({{"traffic.mode", "custom:three_airlines.txt"}}), {0, false});
    out.monopoly = harness::sweep_alpha(default_config({{"traffic.mode", "monopoly"}}), {0, false});
    return out;
  }();
  return s;
}

// 1. Below saturation the virtual queue changes nothing.
Outcome transparency() {
  const std::vector<std::pair<std::string, std::string>> light{{"traffic.n_flights", "150"}, {"seeds.n_days", "16"}};
  auto with_cvq = default_config(light);
  auto without = default_config({{"traffic.n_flights", "150"}, {"seeds.n_days", "16"}, {"cvq.load_limit", "0"}});
  int max_out = 0;
  std::uint32_t equal = 0;
  for (std::uint32_t d = 0; d < with_cvq.n_days; ++d) {
    for (double alpha : {0.0, 1.0}) {
      with_cvq.sim.policy.alpha = alpha;
      without.sim.policy.alpha = alpha;
      const auto a = harness::run_single_day(with_cvq, d);
      const auto b = harness::run_single_day(without, d);
      for (const auto& s : b.steps) max_out = std::max(max_out, s.planes_out[0]);
      equal += a == b;
    }
  }
  const std::uint32_t runs = with_cvq.n_days * 2;
  const bool precondition = max_out < 9;
  return {precondition && equal == runs,
          std::to_string(equal) + "/" + std::to_string(runs) + " day traces bit-equal; max planes out " +
              std::to_string(max_out) + (precondition ? "" : " (demand too high for the check)")};
}

// 2. Daily take-offs under CVQ-9 versus no limit. Day totals always match
// once the day drains, so the check also compares the cumulative take-off
// curves: the summed count of completed take-offs at every step up to the last
// scheduled ready time. Any throughput lost at a saturated runway shows up as
// a lag in that curve.
Outcome throughput() {
  const auto cvq9 = default_config();
  const auto open = default_config({{"cvq.load_limit", "0"}});
  double ratio_sum = 0.0;
  long total9 = 0, total_open = 0;
  for (std::uint32_t d = 0; d < cvq9.n_days; ++d) {
    const auto a = harness::run_single_day(cvq9, d);
    const auto b = harness::run_single_day(open, d);
    Step last_ready = 0;
    for (const auto& f : a.flights) last_ready = std::max(last_ready, f.ready_step);
    const auto area = [&](const sim::DayTrace& t) {
      double sum = 0.0;
      for (const auto& f : t.flights) sum += static_cast<double>(std::max<Step>(0, last_ready - f.wheelsoff_step));
      return sum;
    };
    total9 += static_cast<long>(a.flights.size());
    total_open += static_cast<long>(b.flights.size());
    const double aa = area(a), ab = area(b);
    ratio_sum += ab > 0.0 ? aa / ab : 1.0;
  }
  const double ratio = ratio_sum / cvq9.n_days;
  return {ratio >= 0.99 && total9 == total_open,
          "day totals " + std::to_string(total9) + " vs " + std::to_string(total_open) +
              fmt("; cumulative take-off ratio %.4f (>= 0.99)", ratio)};
}

// 3. Taxi-out summary of the default scenario.
Outcome taxi_summary() {
  const auto& p = point_at(sweeps().top10, 0.0);
  const bool ok = std::abs(p.taxi_out_mean - 13.0) <= 2.0 && std::abs(p.taxi_out_std - 5.0) <= 1.5 &&
                  std::abs(p.planes_out_at_pushback_mean - 7.0) <= 1.0;
  return {ok, fmt("taxi-out mean %.2f min", p.taxi_out_mean) + fmt(", std %.2f min", p.taxi_out_std) +
                  fmt(", planes out at push-back %.2f", p.planes_out_at_pushback_mean)};
}

// 4. Unweighted mean wait is flat across alpha.
Outcome mean_wait_neutrality() {
  std::string detail;
  bool ok = true;
  for (const auto* r : {&sweeps().top10, &sweeps().three}) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : r->points) {
      lo = std::min(lo, p.plane_wait_mean);
      hi = std::max(hi, p.plane_wait_mean);
    }
    const double spread = (hi - lo) / r->points.front().plane_wait_mean;
    ok = ok && r->points.size() == 21 && spread < 0.02;
    detail += (detail.empty() ? "" : "; ") + r->provenance.distribution + fmt(" spread %.2f%%", 100.0 * spread);
  }
  return {ok, detail + " over 21 alphas (< 2%)"};
}

// 5. Three airlines: congested benefit and monotone trade-off.
Outcome three_airline_tradeoff() {
  const auto& r = sweeps().three;
  std::vector<double> alpha, pax, spread;
  for (const auto& p : r.points) {
    alpha.push_back(p.alpha);
    pax.push_back(p.passenger_wait_mean);
    spread.push_back(p.plane_wait_std);
  }
  const auto benefit = point_at(r, 1.0).congested_benefit_pct.value_or(-1.0);
  const double rho_mean = spearman(alpha, pax), rho_std = spearman(alpha, spread);
  const bool ok = benefit >= 8.0 && benefit <= 20.0 && rho_mean <= -0.9 && rho_std >= 0.9;
  return {ok, fmt("congested benefit at alpha=1 %.2f%% (8..20)", benefit) +
                  fmt(", Spearman(wait) %.3f", rho_mean) + fmt(", Spearman(std) %.3f", rho_std)};
}

// 6. Per-class evolution signs at alpha = 1.
Outcome per_type_signs() {
  bool ok = true;
  std::string detail;
  for (const auto* r : {&sweeps().top10, &sweeps().three}) {
    const auto& ev = point_at(*r, 1.0).evolution_pct;
    const double h = ev[class_index(WeightClass::Heavy)].value_or(NAN);
    const double l = ev[class_index(WeightClass::Large)].value_or(NAN);
    const double s = ev[class_index(WeightClass::Small)].value_or(NAN);
    ok = ok && s > 0 && h < 0 && std::abs(l) < std::min(std::abs(s), std::abs(h));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s H %+.1f%% L %+.1f%% S %+.1f%%", r->provenance.distribution.c_str(), h, l, s);
    detail += (detail.empty() ? "" : "; ") + std::string(buf);
  }
  return {ok, detail};
}

// 7. Ten airlines: positive, below monopoly, within band.
Outcome ten_airline_benefit() {
  const double top10 = point_at(sweeps().top10, 1.0).congested_benefit_pct.value_or(-1.0);
  const double mono = point_at(sweeps().monopoly, 1.0).congested_benefit_pct.value_or(-1.0);
  const bool ok = top10 > 0 && top10 <= mono && top10 >= 6.0 && top10 <= 18.0;
  return {ok, fmt("top10 congested benefit %.2f%% (6..18)", top10) + fmt(", monopoly %.2f%%", mono)};
}

// 8a. Shortest path against exhaustive enumeration.
bool shortest_path_oracle(std::string& detail) {
  RandomStream rng(derive_seed(2024, "accept-paths"));
  int ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    airside::TaxiwayGraph g;
    for (int i = 1; i <= n; ++i) g.add_node({static_cast<NodeId>(i), 0.0, 0.0});
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        if (rng.bernoulli(0.5)) g.add_edge(a, b, static_cast<double>(1 + rng.below(5)) * 50.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<NodeId> best_nodes, path{1};
    std::function<void(NodeId, double)> dfs = [&](NodeId at, double len) {
      if (at == static_cast<NodeId>(n)) {
        if (len < best - 1e-9 || (std::abs(len - best) <= 1e-9 && path < best_nodes)) {
          best = std::min(best, len);
          best_nodes = path;
        }
        return;
      }
      for (const auto& e : g.neighbors(at)) {
        if (std::find(path.begin(), path.end(), e.to) != path.end()) continue;
        path.push_back(e.to);
        dfs(e.to, len + e.length_m);
        path.pop_back();
      }
    };
    dfs(1, 0.0);
    try {
      const auto p = airside::shortest_path(g, 1, n);
      ok += !best_nodes.empty() && p.nodes == best_nodes && p.length_m == best;
    } catch (const ConfigError&) {
      ok += best_nodes.empty();
    }
  }
  detail += "paths " + std::to_string(ok) + "/200";
  return ok == 200;
}

// 8b. Runway moment fit round trip.
bool runway_roundtrip_oracle(std::string& detail) {
  RandomStream rng(derive_seed(2024, "accept-runway"));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    const auto m = calibrate::runway_moments(a, b);
    const auto f = calibrate::fit_runway_bernoullis(m.mean, std::sqrt(m.variance));
    worst = std::max({worst, std::abs(f.p1 - std::max(a, b)), std::abs(f.p2 - std::min(a, b))});
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, ", runway fit max error %.1e", worst);
  detail += buf;
  return worst <= 1e-9;
}

// 8c. Taxi time mean against the negative-binomial value.
bool taxi_time_oracle(std::string& detail) {
  const double p = 0.2, k = 10.0;
  RandomStream rng(derive_seed(2024, "accept-taxi"));
  const int n = 100000;
  std::vector<double> steps(n);
  for (auto& s : steps) {
    airside::TaxiState t{3000.0, 0.0, 300.0, p};
    int c = 0;
    while (!t.arrived()) {
      t = airside::advance_taxi(t, rng);
      ++c;
    }
    s = c;
  }
  const auto [mean, se] = testing::mean_se(steps);
  const double z = (mean - k / (1.0 - p)) / se;
  detail += fmt(", taxi mean z %.2f", z);
  return std::abs(z) <= 3.0;
}

// 8d. Push-back choice against exhaustive cost evaluation.
bool policy_oracle(std::string& detail) {
  RandomStream rng(derive_seed(2024, "accept-policy"));
  const int seats[] = {214, 97, 4};
  int ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const policy::PolicyParams params{rng.uniform(), 4.0, 1.0};
    const Step now = 240;
    std::vector<policy::HeldAircraft> held(1 + rng.below(10));
    for (std::size_t i = 0; i < held.size(); ++i) {
      held[i] = {static_cast<FlightId>(i + 1), static_cast<Step>(rng.below(241)), seats[rng.below(3)]};
    }
    std::size_t best = 0;
    double best_cost = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < held.size(); ++i) {
      const double c = policy::holding_cost(
          {static_cast<double>(now - held[i].ready_step) * 0.5, static_cast<double>(held[i].passengers)}, params);
      const bool tie_wins = c == best_cost && (held[i].ready_step < held[best].ready_step ||
                                               (held[i].ready_step == held[best].ready_step && held[i].id < held[best].id));
      if (c > best_cost || tie_wins) {
        best = i;
        best_cost = c;
      }
    }
    ok += policy::select_pushback(held, params, now, 0.5) == best;
  }
  detail += ", policy " + std::to_string(ok) + "/1000";
  return ok == 1000;
}

Outcome oracle_suites() {
  std::string detail;
  const bool a = shortest_path_oracle(detail);
  const bool b = runway_roundtrip_oracle(detail);
  const bool c = taxi_time_oracle(detail);
  const bool d = policy_oracle(detail);
  return {a && b && c && d, detail};
}

// 9. Two full sweeps emit byte-identical files apart from the timestamp.
Outcome determinism() {
  testing::TempDir tmp;
  const auto cfg = default_config({{"seeds.n_days", "8"}});
  harness::emit_results(harness::sweep_alpha(cfg, {0, true}), tmp / "a", true);
  harness::emit_results(harness::sweep_alpha(cfg, {1, true}), tmp / "b", true);
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(tmp / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), tmp / "a");
    auto a = testing::slurp(e.path());
    auto b = testing::slurp(tmp / "b" / rel);
    if (rel == "provenance.json") {
      const auto strip = [](std::string s) {
        const auto at = s.find("\"created_utc\"");
        if (at != std::string::npos) s.erase(at, s.find('\n', at) - at);
        return s;
      };
      a = strip(a);
      b = strip(b);
    }
    ++files;
    same += a == b;
  }
  return {files > 3 && files == same, std::to_string(same) + "/" + std::to_string(files) + " files identical"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"transparency below the load limit", transparency},
      {"throughput preserved under CVQ-9", throughput},
      {"taxi-out summary under CVQ-9", taxi_summary},
      {"mean wait neutral across alpha", mean_wait_neutrality},
      {"three-airline trade-off", three_airline_tradeoff},
      {"per-class evolution signs at alpha=1", per_type_signs},
      {"ten-airline benefit", ten_airline_benefit},
      {"oracle suites", oracle_suites},
      {"sweep determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
