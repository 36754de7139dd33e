#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "core/errors.hpp"
#include "core/random.hpp"
#include "doctest.h"
#include "traffic/traffic.hpp"

using namespace cvq;
using namespace cvq::traffic;

TEST_CASE("fleet mix values") {
  const auto f = FleetMix::logan();
  CHECK(f.classes[class_index(WeightClass::Heavy)].share == doctest::Approx(0.1673));
  CHECK(f.classes[class_index(WeightClass::Large)].share == doctest::Approx(0.7721));
  CHECK(f.classes[class_index(WeightClass::Small)].share == doctest::Approx(0.0606));
  CHECK(f.passengers(WeightClass::Heavy) == 214);
  CHECK(f.passengers(WeightClass::Large) == 97);
  CHECK(f.passengers(WeightClass::Small) == 4);
  CHECK_NOTHROW(f.validate());
  auto bad = f;
  bad.classes[0].share += 0.01;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("airline distributions") {
  SUBCASE("monopoly") {
    const auto d = make_airline_distribution(DistributionMode::Monopoly);
    REQUIRE(d.shares.size() == 1);
    CHECK(d.shares[0].airline == "AA");
    CHECK(d.shares[0].share == 1.0);
  }
  SUBCASE("published shares") {
    const auto top = logan_top_airlines();
    REQUIRE(top.size() == 10);
    double raw = 0.0;
    for (const auto& s : top) raw += s.share;
    CHECK(raw == doctest::Approx(0.7417));
    CHECK(top[0].share == doctest::Approx(0.1060));
    CHECK(top[9].share == doctest::Approx(0.0373));
  }
  SUBCASE("top10 renormalizes proportionally") {
    const auto d = make_airline_distribution(DistributionMode::Top10);
    REQUIRE(d.shares.size() == 10);
    CHECK(d.shares[0].share == doctest::Approx(10.60 / 74.17).epsilon(1e-12));
    CHECK(d.shares[0].share == doctest::Approx(0.1429).epsilon(1e-3));
  }
  SUBCASE("top5 sums to one") {
    const auto d = make_airline_distribution(DistributionMode::Top5);
    REQUIRE(d.shares.size() == 5);
    CHECK(d.shares[4].airline == "AE");
    double sum = 0.0;
    for (const auto& s : d.shares) sum += s.share;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(d.shares[0].share == doctest::Approx(10.60 / (10.60 + 9.27 + 9.04 + 8.95 + 8.14)));
  }
  SUBCASE("custom shares are renormalized and validated") {
    const std::vector<AirlineShare> in{{"XA", 2.0}, {"XB", 2.0}};
    const auto d = make_airline_distribution(DistributionMode::Custom, in);
    CHECK(d.shares[1].share == doctest::Approx(0.5));
    CHECK_THROWS_AS(make_airline_distribution(DistributionMode::Custom, std::vector<AirlineShare>{{"XA", 0.0}}),
                    InputError);
    CHECK_THROWS_AS(
        make_airline_distribution(DistributionMode::Custom, std::vector<AirlineShare>{{"XA", 1.0}, {"XA", 1.0}}),
        InputError);
    CHECK_THROWS_AS(make_airline_distribution(DistributionMode::Custom, std::vector<AirlineShare>{{"XA", -1.0}}),
                    InputError);
  }
  SUBCASE("mode names") {
    for (auto m : {DistributionMode::Monopoly, DistributionMode::Top5, DistributionMode::Top10})
      CHECK(parse_distribution_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_distribution_mode("top7"), ConfigError);
  }
}

namespace {

Schedule parse(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  const std::vector<NodeId> gates{1, 2};
  auto loaded = parse_schedule(in, FleetMix::logan(), gates, 0.5, "s.txt");
  if (warnings) *warnings = loaded.warnings;
  return loaded.schedule;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("schedule parsing") {
  SUBCASE("well-formed file") {
    std::vector<std::string> w;
    const auto s = parse("flight 1 AA H 1 10\nflight 2 AB L 2 11.5\nflight 3 AA S 1 12\n", &w);
    REQUIRE(s.size() == 3);
    CHECK(w.empty());
    CHECK(s.flights[0].passengers == 214);
    CHECK(s.flights[1].ready_step == 23);
    CHECK(s.flights[2].weight_class == WeightClass::Small);
  }
  SUBCASE("out-of-order records are re-sorted with a warning") {
    std::vector<std::string> w;
    const auto s = parse("flight 1 AA H 1 30\nflight 2 AB L 2 10\nflight 3 AC L 2 30\n", &w);
    CHECK(s.flights[0].id == 2);
    CHECK(s.flights[1].id == 1);
    CHECK(s.flights[2].id == 3);
    CHECK(w.size() == 1);
  }
  SUBCASE("validation errors name every offending line") {
    const auto e = error_of("flight 1 AA MEDIUM-HEAVY 1 10\nflight 2 AA L 1 10\nflight 2 AA L 7 -4\n");
    CHECK(e.find("MEDIUM-HEAVY") != std::string::npos);
    CHECK(e.find("s.txt:1") != std::string::npos);
    CHECK(e.find("s.txt:3") != std::string::npos);
  }
  SUBCASE("malformed lines") {
    CHECK(error_of("flight 1 AA H\n").find("s.txt:1") != std::string::npos);
    CHECK(error_of("plane 1 AA H 1 10\n").find("s.txt:1") != std::string::npos);
    CHECK(error_of("flight 1 AA H 1 10 extra\n").find("s.txt:1") != std::string::npos);
  }
  SUBCASE("write/parse round trip") {
    const auto s = parse("flight 4 AA H 1 10\nflight 9 AB S 2 10.5\nflight 2 AC L 1 600\n");
    std::ostringstream out;
    write_schedule(s, out, 0.5);
    CHECK(parse(out.str()) == s);
  }
}

namespace {

SynthesisInputs inputs(std::size_t n, DistributionMode mode = DistributionMode::Top10) {
  SynthesisInputs in;
  in.n_flights = n;
  in.hourly_profile = std::vector<double>(24, 1.0);
  in.fleet = FleetMix::logan();
  in.airlines = make_airline_distribution(mode);
  in.gates = {1, 2, 3};
  return in;
}

// Multinomial 3-sigma band for one category.
bool within_3_sigma(std::size_t count, std::size_t n, double p) {
  const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return std::abs(static_cast<double>(count) - static_cast<double>(n) * p) <= 3.0 * sd;
}

}  // namespace

TEST_CASE("schedule synthesis") {
  SUBCASE("no flights") {
    RandomStream rng(1);
    CHECK(synth_schedule(inputs(0), rng).empty());
  }
  SUBCASE("class and airline frequencies over 1e5 draws") {
    RandomStream rng(derive_seed(3, "synth-freq"));
    const std::size_t n = 100000;
    const auto s = synth_schedule(inputs(n), rng);
    REQUIRE(s.size() == n);
    std::map<WeightClass, std::size_t> cls;
    std::map<std::string, std::size_t> airline;
    for (const auto& f : s.flights) {
      ++cls[f.weight_class];
      ++airline[f.airline];
    }
    CHECK(within_3_sigma(cls[WeightClass::Heavy], n, 0.1673));
    CHECK(within_3_sigma(cls[WeightClass::Large], n, 0.7721));
    CHECK(within_3_sigma(cls[WeightClass::Small], n, 0.0606));
    CHECK(within_3_sigma(airline["AA"], n, 10.60 / 74.17));
    CHECK(within_3_sigma(airline["AJ"], n, 3.73 / 74.17));
  }
  SUBCASE("ready times follow the hourly profile and are sorted") {
    auto in = inputs(20000);
    in.hourly_profile.assign(24, 0.0);
    in.hourly_profile[6] = 1.0;
    in.hourly_profile[7] = 3.0;
    RandomStream rng(9);
    const auto s = synth_schedule(in, rng);
    std::size_t h7 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& f = s.flights[i];
      CHECK(f.id == i + 1);
      CHECK(f.ready_step >= 6 * 120);
      CHECK(f.ready_step < 8 * 120);
      if (i > 0) CHECK(s.flights[i - 1].ready_step <= f.ready_step);
      if (f.ready_step >= 7 * 120) ++h7;
    }
    CHECK(within_3_sigma(h7, s.size(), 0.75));
  }
  SUBCASE("changing the airline mix keeps times, classes and gates") {
    RandomStream a(21), b(21);
    const auto s1 = synth_schedule(inputs(500, DistributionMode::Top10), a);
    const auto s2 = synth_schedule(inputs(500, DistributionMode::Monopoly), b);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      CHECK(s1.flights[i].ready_step == s2.flights[i].ready_step);
      CHECK(s1.flights[i].weight_class == s2.flights[i].weight_class);
      CHECK(s1.flights[i].gate == s2.flights[i].gate);
      CHECK(s2.flights[i].airline == "AA");
    }
  }
}
