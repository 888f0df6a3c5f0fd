#include <doctest.h>

#include <numeric>

#include "dtnsat/traffic.hpp"
#include "oracles.hpp"

using namespace dtnsat;

namespace {

std::vector<NodeId> ids(std::size_t n) {
  std::vector<NodeId> out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

}  // namespace

TEST_CASE("presets") {
  CHECK(preset("one").kind == TrafficKind::one);
  CHECK(preset("moderate").interval_min == 300.0);
  CHECK(preset("moderate").interval_max == 300.0);
  CHECK(preset("high").interval_max == 30.0);
  for (const char* name : {"one", "moderate", "high"}) {
    CHECK(preset(name).message_size == 2064);
    CHECK(preset(name).ttl == 3600.0);
  }
  CHECK_THROWS_WITH(preset("often"), "unknown traffic preset 'often'");
}

TEST_CASE("schedule sizes") {
  const auto all = ids(100);
  const auto noi = ids(5);
  Rng rng(1);
  SUBCASE("one message regardless of source count") {
    const auto ev = schedule(preset("one"), noi, all, rng);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].time == 0.0);
    CHECK(ev[0].source == 0);
  }
  SUBCASE("every 300 s over a 3600 s window") {
    const auto ev = schedule(preset("moderate"), noi, all, rng);
    CHECK(ev.size() == 5 * 12);
    CHECK(ev.back().time == doctest::Approx(3300.0));
  }
  SUBCASE("every 30 s over a 3600 s window") {
    const auto ev = schedule(preset("high"), noi, all, rng);
    CHECK(ev.size() == 5 * 120);
  }
  SUBCASE("ordering, ids and destinations") {
    auto p = preset("high");
    p.interval_min = 10;
    p.interval_max = 50;
    const auto ev = schedule(p, noi, all, rng);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      CHECK(ev[i].message == i);
      CHECK(ev[i].destination != ev[i].source);
      CHECK(ev[i].time < p.creation_window);
      if (i > 0) {
        CHECK((ev[i - 1].time < ev[i].time ||
               (ev[i - 1].time == ev[i].time && ev[i - 1].source <= ev[i].source)));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS(schedule(preset("one"), std::vector<NodeId>{}, all, rng));
    CHECK_THROWS(schedule(preset("one"), noi, ids(1), rng));
  }
}

TEST_CASE("destinations are uniform over the other nodes (chi-square, p > 0.01)") {
  // 10 nodes, source excluded: 9 categories, 8 degrees of freedom.
  const auto all = ids(10);
  const std::vector<NodeId> noi{3};
  auto p = preset("high");
  p.interval_min = p.interval_max = 1.0;
  p.creation_window = 10000.0;
  Rng rng(12345);
  const auto ev = schedule(p, noi, all, rng);
  REQUIRE(ev.size() == 10000);
  std::vector<std::size_t> counts;
  for (NodeId n : all) {
    if (n == 3) continue;
    counts.push_back(static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [n](const CreationEvent& e) { return e.destination == n; })));
  }
  CHECK(oracle::chi_square_uniform(counts) < 20.09);
}

TEST_CASE("same seed, same schedule") {
  const auto all = ids(50);
  const auto noi = ids(5);
  Rng a(9);
  Rng b(9);
  const auto x = schedule(preset("high"), noi, all, a);
  const auto y = schedule(preset("high"), noi, all, b);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].destination == y[i].destination);
}
