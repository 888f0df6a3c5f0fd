#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dtnsat/event_log.hpp"
#include "dtnsat/simulation.hpp"

namespace dtnsat {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SaturationPoint {
  double time = 0.0;
  double pct = 0.0;
};

// Share of all nodes that have held a message at least once. The creator
// counts from creation time; repeat receipts are counted separately.
struct SaturationSeries {
  MessageIndex message = 0;
  NodeId creator = 0;
  double created_at = 0.0;
  std::vector<SaturationPoint> points;
  std::size_t unique_receivers = 0;  // including the creator
  std::size_t redeliveries = 0;

  double final_pct() const { return points.empty() ? 0.0 : points.back().pct; }
};

// Incremental form of saturation() for consumers that see records one at a
// time and do not keep the log.
class SaturationTracker {
 public:
  explicit SaturationTracker(std::size_t total_nodes);
  void add(const EventRecord& r);
  // Series for every created message, in message order.
  std::vector<SaturationSeries> series() const;

 private:
  struct State {
    bool created = false;
    SaturationSeries series;
    std::vector<bool> seen;
  };
  std::size_t total_nodes_;
  std::vector<State> messages_;
};

std::vector<SaturationSeries> saturation(std::span<const EventRecord> records, std::size_t total_nodes);

// Seconds from creation to the first 100% point; absent if never reached.
std::optional<double> time_to_full_saturation(const SaturationSeries& series);

// s0 = x0, s_i = (1 - alpha) s_{i-1} + alpha x_i.
std::vector<double> ema(std::span<const double> values, double alpha = 0.1);

std::vector<OccupancySample> read_occupancy_csv(const std::filesystem::path& path);
double max_avg_occupancy(std::span<const OccupancySample> samples);

// A run directory (event.log, occupancy.csv, manifest.txt) plus the parameters
// that label it in the tables.
struct RunInput {
  std::string run;
  std::vector<std::pair<std::string, std::string>> params;
  std::filesystem::path directory;
  std::size_t nodes = 0;  // 0: take it from the manifest
};

// Runs listed in index.csv, a single run directory, or every subdirectory
// holding an event log.
std::vector<RunInput> discover_runs(const std::filesystem::path& logs_dir);

// Writes table_saturation_times.csv, table_occupancy.csv,
// table_unsaturated.csv, series_<msg>.csv and ema_series.csv to out_dir.
// Runs whose inputs are missing or unreadable get status "absent".
void summarize(const std::vector<RunInput>& runs, const std::filesystem::path& out_dir);

}  // namespace dtnsat
