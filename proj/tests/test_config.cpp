#include <doctest.h>

#include "dtnsat/config.hpp"

using namespace dtnsat;

namespace {

const std::string kBase =
    "router = epidemic\n"
    "buffer.capacity = 500KB\n"
    "traffic.preset = one\n";

}  // namespace

TEST_CASE("single config") {
  const auto runs = load_config(kBase + "group2.count = 45  # crowd\n\n# comment\n");
  REQUIRE(runs.size() == 1);
  const auto& c = runs[0].config;
  CHECK(c.router.kind == RouterKind::epidemic);
  CHECK(c.router.buffer_capacity == 500000);
  CHECK(c.total_nodes() == 50);
  CHECK(c.end_time == 9000.0);
  CHECK(c.tick == 0.1);
  CHECK(c.router.immunity_time == c.end_time);
  CHECK(runs[0].swept.empty());
}

TEST_CASE("sweeps expand to the cartesian product") {
  const auto runs = load_config(
      "router = epidemic\nbuffer.capacity = [500KB; 5MB]\ntraffic.preset = one\n"
      "group2.count = [95; 495; 995; 2995]\n");
  REQUIRE(runs.size() == 8);
  CHECK(runs[0].config.router.buffer_capacity == 500000);
  CHECK(runs[0].config.group2.count == 95);
  CHECK(runs[1].config.group2.count == 495);
  CHECK(runs[4].config.router.buffer_capacity == 5000000);
  CHECK(runs[7].config.group2.count == 2995);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(runs[i].index == i);
    CHECK(runs[i].swept.size() == 2);
  }
  // Same settings apart from the swept key give different hashes.
  CHECK(runs[0].config.config_hash() != runs[1].config.config_hash());
}

TEST_CASE("config errors name the key") {
  CHECK_THROWS_WITH_AS(load_config("router = wav\nbuffer.capacity = 1KB\ntraffic.preset = one\n"),
                       "unknown router 'wav'", ConfigError);
  CHECK_THROWS_WITH_AS(load_config(kBase + "colour = red\n"), "unknown config key 'colour'", ConfigError);
  CHECK_THROWS_WITH_AS(load_config(kBase + "group2.count = []\n"),
                       "config key 'group2.count': empty sweep list", ConfigError);
  CHECK_THROWS_WITH_AS(load_config("router = wave\ntraffic.preset = one\n"),
                       "missing required config key 'buffer.capacity'", ConfigError);
  CHECK_THROWS_AS(load_config(kBase + "tick = fast\n"), ConfigError);
  CHECK_THROWS_AS(load_config(kBase + "tick = 0\n"), ConfigError);
  CHECK_THROWS_AS(load_config(kBase + "router = wave\n"), ConfigError);  // duplicate
  CHECK_THROWS_AS(load_config(kBase + "group1.count = 1\ngroup2.count = 0\n"), ConfigError);
  CHECK_THROWS_AS(load_config(kBase + "map.source = wkt\nmap.wkt = /no/such/file.wkt\n"), ConfigError);
}

TEST_CASE("traffic overrides apply on top of the preset in any order") {
  const auto c = load_single_config(
      "traffic.interval_max = 40\nrouter = wave\nbuffer.capacity = 500KB\n"
      "traffic.preset = high\ntraffic.interval_min = 20\nend_time = 5000\ntraffic.window = 1000\n");
  CHECK(c.traffic.kind == TrafficKind::periodic);
  CHECK(c.traffic.interval_min == 20.0);
  CHECK(c.traffic.interval_max == 40.0);
  CHECK(c.traffic.creation_window == 1000.0);
  CHECK(c.router.immunity_time == 5000.0);
}

TEST_CASE("byte sizes") {
  CHECK(parse_byte_size("2064") == 2064);
  CHECK(parse_byte_size("500KB") == 500000);
  CHECK(parse_byte_size("5 MB") == 5000000);
  CHECK(parse_byte_size("1.4MB") == 1400000);
  CHECK_THROWS_AS(parse_byte_size("5GB"), ConfigError);
  CHECK_THROWS_AS(parse_byte_size("KB"), ConfigError);
}

TEST_CASE("bundled presets load") {
  const std::string dir = std::string(DTNSAT_SOURCE_DIR) + "/configs/";
  for (const char* name : {"one.cfg", "moderate.cfg", "high.cfg"}) {
    CAPTURE(name);
    const auto runs = load_config_file(dir + name);
    CHECK(runs.size() == 16);
  }
  CHECK(load_config_file(dir + "grid-small.cfg").size() == 1);
}
