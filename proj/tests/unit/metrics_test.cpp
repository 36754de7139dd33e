#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "doctest.h"
#include "metrics/metrics.hpp"
#include "sim/trace.hpp"

using namespace cvq;
using namespace cvq::metrics;

namespace {

WaitRecord rec(double wait, int pax, WeightClass c = WeightClass::Large, int active = 0, double taxi = 0.0,
               int out = 0) {
  WaitRecord r;
  r.wait_min = wait;
  r.passengers = pax;
  r.weight_class = c;
  r.active_planes_at_ready = active;
  r.taxi_out_min = taxi;
  r.planes_out_at_pushback = out;
  r.airline = "AA";
  return r;
}

}  // namespace

TEST_CASE("records from a trace use ready-to-wheels-off and push-back-to-wheels-off") {
  sim::DayTrace t;
  sim::FlightRecord f;
  f.id = 1;
  f.airline = "AB";
  f.weight_class = WeightClass::Heavy;
  f.passengers = 214;
  f.ready_step = 10;
  f.pushback_step = 14;
  f.queue_entry_step = 30;
  f.wheelsoff_step = 34;
  f.active_planes_at_ready = 6;
  f.planes_out_at_pushback = 8;
  t.flights.push_back(f);
  const auto rs = wait_records(t);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].wait_min == doctest::Approx(12.0));
  CHECK(rs[0].taxi_out_min == doctest::Approx(10.0));
  CHECK(rs[0].passengers == 214);
  CHECK(rs[0].active_planes_at_ready == 6);
  CHECK(rs[0].planes_out_at_pushback == 8);
}

TEST_CASE("passenger-weighted wait") {
  const std::vector<WaitRecord> one{rec(12, 97)};
  CHECK(passenger_weighted_wait(one) == doctest::Approx(12.0));
  const std::vector<WaitRecord> two{rec(10, 214), rec(20, 4)};
  CHECK(passenger_weighted_wait(two) == doctest::Approx(2220.0 / 218.0));
  CHECK(passenger_weighted_wait(two) == doctest::Approx(10.183).epsilon(1e-4));
  const std::vector<WaitRecord> equal{rec(3, 97), rec(8, 97), rec(13, 97)};
  CHECK(passenger_weighted_wait(equal) == doctest::Approx(mean_wait(equal)));
  CHECK_THROWS_AS(passenger_weighted_wait(std::vector<WaitRecord>{}), MetricError);
  CHECK_THROWS_AS(passenger_weighted_wait(std::vector<WaitRecord>{rec(5, 0)}), MetricError);
}

TEST_CASE("wait standard deviation") {
  CHECK(wait_std(std::vector<WaitRecord>{rec(7, 1), rec(7, 1), rec(7, 1)}) == doctest::Approx(0.0));
  CHECK(wait_std(std::vector<WaitRecord>{rec(10, 1), rec(20, 1)}) == doctest::Approx(5.0));
  const std::vector<WaitRecord> mixed{rec(1, 4, WeightClass::Small), rec(50, 214, WeightClass::Heavy),
                                      rec(5, 4, WeightClass::Small), rec(9, 4, WeightClass::Small),
                                      rec(30, 97, WeightClass::Large)};
  // Small waits {1, 5, 9}: mean 5, population variance 32/3.
  CHECK(wait_std(mixed, WeightClass::Small) == doctest::Approx(std::sqrt(32.0 / 3.0)));
  CHECK(mean_wait(mixed, WeightClass::Small) == doctest::Approx(5.0));
  CHECK_THROWS_AS(wait_std(std::vector<WaitRecord>{rec(1, 1)}), MetricError);
  CHECK_THROWS_AS(mean_wait(std::vector<WaitRecord>{}), MetricError);
}

TEST_CASE("benefit") {
  CHECK(benefit_percent(20.0, 20.0) == doctest::Approx(0.0));
  CHECK(benefit_percent(18.0, 20.0) == doctest::Approx(10.0));
  CHECK(benefit_percent(22.0, 20.0) == doctest::Approx(-10.0));
  CHECK_THROWS_AS(benefit_percent(1.0, 0.0), MetricError);
}

TEST_CASE("per-type evolution against the alpha-0 point") {
  SweepPoint base, cur;
  base.per_class[class_index(WeightClass::Small)] = {3, 10.0, 0.0};
  cur.per_class[class_index(WeightClass::Small)] = {3, 14.0, 0.0};
  base.per_class[class_index(WeightClass::Heavy)] = {3, 20.0, 0.0};
  cur.per_class[class_index(WeightClass::Heavy)] = {3, 15.0, 0.0};
  const auto ev = per_type_evolution(cur, base);
  CHECK(*ev[class_index(WeightClass::Small)] == doctest::Approx(40.0));
  CHECK(*ev[class_index(WeightClass::Heavy)] == doctest::Approx(-25.0));
  CHECK_FALSE(ev[class_index(WeightClass::Large)].has_value());
  const auto self = per_type_evolution(base, base);
  CHECK(*self[class_index(WeightClass::Small)] == doctest::Approx(0.0));
}

TEST_CASE("summaries and the congested subset") {
  const std::vector<WaitRecord> rs{rec(10, 214, WeightClass::Heavy, 12), rec(20, 4, WeightClass::Small, 3),
                                   rec(30, 97, WeightClass::Large, 9)};
  const auto p = summarize(0.5, rs, 9);
  CHECK(p.flights == 3);
  CHECK(p.plane_wait_mean == doctest::Approx(20.0));
  CHECK(p.congested_flights == 2);
  CHECK(*p.congested_passenger_wait_mean == doctest::Approx((10.0 * 214 + 30.0 * 97) / 311.0));
  const auto none = summarize(0.5, rs, 50);
  CHECK_FALSE(none.congested_passenger_wait_mean.has_value());

  std::vector<SweepPoint> pts{summarize(0.0, rs, 9), p};
  pts[1].passenger_wait_mean = pts[0].passenger_wait_mean * 0.9;
  apply_baseline(pts, pts[0]);
  CHECK(pts[0].benefit_pct == doctest::Approx(0.0));
  CHECK(pts[1].benefit_pct == doctest::Approx(10.0));
}

TEST_CASE("wait versus active planes curve") {
  SUBCASE("single bin") {
    std::vector<WaitRecord> rs;
    for (int i = 0; i < 30; ++i) rs.push_back(rec(i, 97, WeightClass::Large, 5));
    const auto c = wait_vs_active_planes(rs);
    REQUIRE(c.size() == 1);
    CHECK(c[0].bin == 5);
    CHECK(c[0].count == 30);
    CHECK_FALSE(c[0].low_confidence);
  }
  SUBCASE("two bins computed by hand") {
    const std::vector<WaitRecord> rs{rec(10, 214, WeightClass::Heavy, 2), rec(20, 4, WeightClass::Small, 2),
                                     rec(6, 97, WeightClass::Large, 7)};
    const auto c = wait_vs_active_planes(rs, 1);
    REQUIRE(c.size() == 2);
    CHECK(c[0].bin == 2);
    CHECK(c[0].value == doctest::Approx(2220.0 / 218.0));
    CHECK(c[1].bin == 7);
    CHECK(c[1].value == doctest::Approx(6.0));
  }
  SUBCASE("sparse bins are flagged and dropped from confident views") {
    std::vector<WaitRecord> rs;
    for (int i = 0; i < 25; ++i) rs.push_back(rec(1, 97, WeightClass::Large, 1));
    for (int i = 0; i < 5; ++i) rs.push_back(rec(1, 97, WeightClass::Large, 2));
    const auto c = wait_vs_active_planes(rs);
    REQUIRE(c.size() == 2);
    CHECK(c[1].low_confidence);
    const auto ok = confident_bins(c);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].bin == 1);
  }
}

TEST_CASE("taxi-out spread versus planes out") {
  SUBCASE("deterministic run has zero spread") {
    const std::vector<WaitRecord> rs{rec(5, 97, WeightClass::Large, 0, 5.0, 0)};
    const auto c = taxi_std_vs_planes_out(rs, 1);
    REQUIRE(c.size() == 1);
    CHECK(c[0].value == doctest::Approx(0.0));
  }
  SUBCASE("known per-bin variance") {
    const std::vector<WaitRecord> rs{rec(0, 1, WeightClass::Large, 0, 4.0, 3), rec(0, 1, WeightClass::Large, 0, 8.0, 3),
                                     rec(0, 1, WeightClass::Large, 0, 1.0, 6), rec(0, 1, WeightClass::Large, 0, 2.0, 6),
                                     rec(0, 1, WeightClass::Large, 0, 3.0, 6)};
    const auto c = taxi_std_vs_planes_out(rs, 1);
    REQUIRE(c.size() == 2);
    CHECK(c[0].value == doctest::Approx(2.0));
    CHECK(c[1].value == doctest::Approx(std::sqrt(2.0 / 3.0)));
  }
}
