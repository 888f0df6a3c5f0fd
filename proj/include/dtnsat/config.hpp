#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtnsat/contacts.hpp"
#include "dtnsat/mobility.hpp"
#include "dtnsat/router.hpp"
#include "dtnsat/traffic.hpp"

namespace dtnsat {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MapSource { grid, wkt };

struct MapConfig {
  MapSource source = MapSource::grid;
  std::size_t grid_rows = 11;
  std::size_t grid_cols = 11;
  double grid_spacing = 60.0;
  std::vector<std::filesystem::path> wkt_files;
  double snap_tolerance = 0.1;
};

struct GroupConfig {
  std::size_t count = 0;
  MobilityParams mobility;
  // Inline "BBOX ..." / "POLYGON (...)" text, or a region file path; empty
  // means the whole map.
  std::string region;
};

struct ScenarioConfig {
  double end_time = 9000.0;
  double tick = 0.1;
  std::uint64_t seed = 1;
  MapConfig map;
  GroupConfig group1{5, {}, {}};
  GroupConfig group2{95, {}, {}};
  LinkParams link;
  RouterParams router;
  std::string traffic_preset = "one";
  TrafficPattern traffic;
  double report_interval = 10.0;
  std::filesystem::path output_dir = "out";

  // Resolved "key = value" assignments in file order (for manifests/hashes).
  std::vector<std::pair<std::string, std::string>> assignments;

  std::size_t total_nodes() const { return group1.count + group2.count; }
  void validate() const;
  // Hash of every assignment except seed and output.dir.
  std::string config_hash() const;
};

struct ExpandedRun {
  std::size_t index = 0;
  ScenarioConfig config;
  // Values of swept keys for this run, in file order.
  std::vector<std::pair<std::string, std::string>> swept;
};

// Line-oriented "key = value" text; '#' starts a comment; a value written as
// "[a; b; c]" is a sweep. Returns the cartesian product of all sweeps (later
// keys vary fastest). Relative file paths resolve against base_dir.
std::vector<ExpandedRun> load_config(std::string_view text,
                                     const std::filesystem::path& base_dir = {});
std::vector<ExpandedRun> load_config_file(const std::filesystem::path& path);

// Convenience for text without sweeps.
ScenarioConfig load_single_config(std::string_view text, const std::filesystem::path& base_dir = {});

// Applies one assignment to a config (same rules as the file loader).
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

// Byte counts accept an optional unit: B, KB (1000) or MB (1,000,000).
Bytes parse_byte_size(std::string_view text);

}  // namespace dtnsat
