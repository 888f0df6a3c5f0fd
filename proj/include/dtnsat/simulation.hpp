#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtnsat/config.hpp"
#include "dtnsat/contacts.hpp"
#include "dtnsat/event_log.hpp"
#include "dtnsat/mobility.hpp"
#include "dtnsat/road_graph.hpp"
#include "dtnsat/router.hpp"
#include "dtnsat/traffic.hpp"

namespace dtnsat {

using EventSink = std::function<void(const EventRecord&)>;

struct OccupancySample {
  double time = 0.0;
  double mean_occupancy_pct = 0.0;
};

struct RunTotals {
  std::array<std::uint64_t, 8> by_kind{};  // indexed by EventKind
  std::uint64_t messages = 0;
  std::uint64_t records = 0;

  std::uint64_t count(EventKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
};

// Road graph of the configured map (grid or WKT files).
RoadGraph load_map(const MapConfig& map, std::vector<std::string>* warnings = nullptr);

// Region text given inline ("BBOX ..." / "POLYGON ...") or as a file path.
Region load_region(const std::string& spec);

// One scenario run. Each call to step() processes one tick:
//   1. advance mobility (not at t = 0)
//   2. detect contacts; lost contacts abort their transfers
//   3. router expiry
//   4. due message creations
//   5. continue carried transfers, then start new ones in node order
//   6. records go to the sink as they happen
//   7. occupancy sample every report interval
class Simulation {
 public:
  // `schedule` replaces the generated traffic when given.
  Simulation(const ScenarioConfig& config, EventSink sink,
             std::optional<std::vector<CreationEvent>> schedule = std::nullopt);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  bool done() const { return tick_index_ > last_tick_; }
  void step();
  void run();

  double now() const;
  std::uint64_t tick_index() const { return tick_index_; }
  std::size_t node_count() const { return routers_.size(); }
  const Router& router(NodeId n) const { return *routers_[n]; }
  const MovementState& movement(NodeId n) const { return movement_[n]; }
  std::span<const GeoPoint> positions() const { return positions_; }
  std::span<const NodePair> contacts() const { return contacts_; }
  std::span<const Message> messages() const { return messages_; }
  std::span<const CreationEvent> creation_schedule() const { return schedule_; }
  const LinkScheduler& links() const { return links_; }
  const RoadGraph& graph_of(NodeId n) const;

  std::span<const OccupancySample> occupancy() const { return occupancy_; }
  const RunTotals& totals() const { return totals_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct ContactMemo;

  void emit(EventKind kind, MessageIndex m, NodeId from, std::optional<NodeId> to = std::nullopt);
  void advance_mobility();
  void update_contacts();
  void expire();
  void create_due();
  void transfer();
  void deliver(const TransferJob& job, bool carried);
  void abort_jobs(const std::vector<TransferJob>& jobs);
  void sample_occupancy();

  ScenarioConfig config_;
  EventSink sink_;
  double tick_;
  std::uint64_t last_tick_;
  std::uint64_t sample_every_;
  std::uint64_t tick_index_ = 0;
  double now_ = 0.0;
  double stamp_ = 0.0;  // now_ rounded for records

  std::vector<std::shared_ptr<const RoadGraph>> graphs_;  // per group
  std::vector<std::uint8_t> group_of_;
  std::vector<Rng> node_rng_;
  std::vector<MovementState> movement_;
  std::vector<GeoPoint> positions_;
  std::vector<std::unique_ptr<Router>> routers_;

  std::vector<CreationEvent> schedule_;
  std::size_t next_creation_ = 0;
  std::vector<Message> messages_;

  std::vector<NodePair> contacts_;
  std::vector<ContactMemo> memos_;  // parallel to contacts_
  LinkScheduler links_;

  std::vector<OccupancySample> occupancy_;
  RunTotals totals_;
  std::vector<std::string> warnings_;
  std::vector<Offer> offers_;
};

struct RunSummary {
  std::filesystem::path directory;
  RunTotals totals;
  std::string log_digest;
  double max_mean_occupancy_pct = 0.0;
  std::vector<std::string> warnings;
};

// Runs the scenario and writes event.log, occupancy.csv and manifest.txt into
// out_dir (created if needed).
RunSummary run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace dtnsat
