#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "dtnsat/analysis.hpp"
#include "dtnsat/batch.hpp"
#include "dtnsat/simulation.hpp"

using namespace dtnsat;
namespace fs = std::filesystem;

namespace {

ScenarioConfig tiny_static() {
  // Three nodes on a 1 m square: always in range of each other.
  ScenarioConfig c;
  c.map.grid_rows = c.map.grid_cols = 2;
  c.map.grid_spacing = 1.0;
  c.group1.count = 1;
  c.group2.count = 2;
  c.end_time = 1.0;
  c.traffic = preset("one");
  c.traffic.creation_window = c.end_time;
  return c;
}

ScenarioConfig busy(RouterKind kind, std::uint64_t seed = 3) {
  // Dense, small map with small buffers so that evictions happen.
  ScenarioConfig c;
  c.seed = seed;
  c.map.grid_rows = c.map.grid_cols = 4;
  c.map.grid_spacing = 15.0;
  c.group1.count = 5;
  c.group2.count = 25;
  c.end_time = 600.0;
  c.router.kind = kind;
  c.router.buffer_capacity = 10 * 2064;
  c.router.immunity_time = c.end_time;
  c.traffic = preset("high");
  c.traffic.creation_window = 300.0;
  c.traffic.ttl = 200.0;
  return c;
}

std::vector<EventRecord> collect(const ScenarioConfig& c) {
  std::vector<EventRecord> out;
  Simulation sim(c, [&](const EventRecord& r) { out.push_back(r); });
  sim.run();
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("three static nodes all hold the message after the first tick") {
  std::vector<EventRecord> log;
  Simulation sim(tiny_static(), [&](const EventRecord& r) { log.push_back(r); });
  sim.step();
  sim.step();
  for (NodeId n = 0; n < 3; ++n) CHECK(sim.router(n).buffer().contains(0));
  const auto s = saturation(log, 3);
  REQUIRE(s.size() == 1);
  REQUIRE(time_to_full_saturation(s[0]));
  CHECK(*time_to_full_saturation(s[0]) <= 0.1 + 1e-9);
}

TEST_CASE("the tick loop covers the whole run") {
  auto c = tiny_static();
  c.end_time = 2.0;
  std::size_t samples = 0;
  Simulation sim(c, [](const EventRecord&) {});
  std::uint64_t steps = 0;
  while (!sim.done()) {
    sim.step();
    ++steps;
  }
  samples = sim.occupancy().size();
  CHECK(steps == 21);
  CHECK(samples == 1);  // t = 0 only; next sample due at 10 s
}

TEST_CASE("log invariants under buffer pressure") {
  for (RouterKind kind : {RouterKind::epidemic, RouterKind::wave, RouterKind::direct_delivery,
                          RouterKind::first_contact}) {
    CAPTURE(static_cast<int>(kind));
    const auto c = busy(kind);
    std::vector<EventRecord> log;
    Simulation sim(c, [&](const EventRecord& r) { log.push_back(r); });
    while (!sim.done()) {
      sim.step();
      std::vector<int> busy_count(sim.node_count(), 0);
      for (const auto& job : sim.links().jobs()) {
        ++busy_count[job.sender];
        ++busy_count[job.receiver];
      }
      for (int b : busy_count) REQUIRE(b <= 1);
      for (NodeId n = 0; n < sim.node_count(); ++n) {
        REQUIRE(sim.router(n).buffer().occupied() <= sim.router(n).buffer().capacity());
      }
    }

    std::set<std::tuple<MessageIndex, NodeId, NodeId>> started;
    std::map<MessageIndex, double> created;
    double last = 0.0;
    for (const auto& r : log) {
      REQUIRE(r.time >= last);
      last = r.time;
      if (r.kind == EventKind::create) created[r.message] = r.time;
      if (r.kind == EventKind::send_start) started.insert({r.message, r.from, *r.to});
      if (r.kind == EventKind::received) {
        CHECK(started.count({r.message, r.from, *r.to}) == 1);
        CHECK(r.time < created.at(r.message) + c.traffic.ttl);
        CHECK(r.from != *r.to);
      }
    }
    if (kind == RouterKind::epidemic || kind == RouterKind::wave) {
      CHECK(sim.totals().count(EventKind::drop_buffer) > 0);
      CHECK(sim.totals().count(EventKind::received) > 0);
    }
    CHECK(sim.totals().records == log.size());
  }
}

TEST_CASE("runs are deterministic and seed sensitive") {
  const auto a = collect(busy(RouterKind::epidemic, 5));
  const auto b = collect(busy(RouterKind::epidemic, 5));
  const auto other = collect(busy(RouterKind::epidemic, 6));
  CHECK(a == b);
  CHECK(a != other);
}

TEST_CASE("schedule override") {
  auto c = tiny_static();
  c.end_time = 2.0;
  const std::vector<CreationEvent> plan{{0.0, 0, 1, 0}, {1.0, 1, 2, 1}};
  Simulation sim(c, [](const EventRecord&) {}, plan);
  CHECK(sim.creation_schedule().size() == 2);
  sim.run();
  CHECK(sim.messages().size() == 2);

  const std::vector<CreationEvent> self{{0.0, 1, 1, 0}};
  CHECK_THROWS(Simulation(c, [](const EventRecord&) {}, self));
  const std::vector<CreationEvent> unsorted{{1.0, 0, 1, 0}, {0.0, 1, 2, 1}};
  CHECK_THROWS(Simulation(c, [](const EventRecord&) {}, unsorted));
}

TEST_CASE("batch writes one directory per run and an index") {
  const auto root = fs::temp_directory_path() / "dtnsat_batch_test";
  fs::remove_all(root);
  const std::string text =
      "router = [epidemic; wave]\n"
      "buffer.capacity = [20KB; 500KB]\n"
      "group2.count = [15; 25]\n"
      "traffic.preset = moderate\n"
      "map.grid.rows = 4\nmap.grid.cols = 4\nmap.grid.spacing = 15\n"
      "end_time = 120\ntraffic.window = 60\nseed = 10\n";
  const auto runs = load_config(text);
  REQUIRE(runs.size() == 8);

  const auto first = run_batch(runs, root / "a", 4);
  const auto second = run_batch(runs, root / "b", 4);
  REQUIRE(first.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CAPTURE(i);
    CHECK(first[i].ok);
    CHECK(first[i].seed == 10 + i);
    CHECK(fs::exists(root / "a" / run_directory_name(i) / "event.log"));
    CHECK(read_file(root / "a" / run_directory_name(i) / "event.log") ==
          read_file(root / "b" / run_directory_name(i) / "event.log"));
  }
  const auto inputs = discover_runs(root / "a");
  REQUIRE(inputs.size() == 8);
  CHECK(inputs[2].nodes == 20);
  CHECK(inputs[3].nodes == 30);
  summarize(inputs, root / "analysis");
  std::ifstream occ(root / "analysis" / "table_occupancy.csv");
  std::size_t rows = 0;
  for (std::string line; std::getline(occ, line);) ++rows;
  CHECK(rows == 9);
  fs::remove_all(root);
}

TEST_CASE("run_scenario writes matching artifacts") {
  const auto dir = fs::temp_directory_path() / "dtnsat_run_test";
  fs::remove_all(dir);
  const auto c = busy(RouterKind::wave);
  const auto summary = run_scenario(c, dir);
  const auto parsed = parse_event_log(dir / "event.log");
  CHECK(parsed == collect(c));
  Fnv1a h;
  h.update(read_file(dir / "event.log"));
  CHECK(h.hex() == summary.log_digest);
  const auto occ = read_occupancy_csv(dir / "occupancy.csv");
  CHECK(occ.size() == 61);
  CHECK(max_avg_occupancy(occ) == doctest::Approx(summary.max_mean_occupancy_pct).epsilon(1e-6));
  CHECK(read_file(dir / "manifest.txt").find("nodes = 30") != std::string::npos);
  fs::remove_all(dir);
}
