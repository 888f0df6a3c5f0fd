#include "dtnsat/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dtnsat/wkt.hpp"

namespace dtnsat {

RoadGraph load_map(const MapConfig& map, std::vector<std::string>* warnings) {
  RoadGraph graph;
  if (map.source == MapSource::grid) {
    graph = generate_grid(map.grid_rows, map.grid_cols, map.grid_spacing);
  } else {
    std::vector<Polyline> polylines;
    std::size_t skipped = 0;
    std::size_t rejected = 0;
    for (const auto& file : map.wkt_files) {
      auto parsed = parse_wkt(read_text_file(file));
      skipped += parsed.skipped_geometries;
      rejected += parsed.rejected_polylines;
      std::move(parsed.polylines.begin(), parsed.polylines.end(), std::back_inserter(polylines));
    }
    if (warnings && skipped > 0) {
      warnings->push_back(std::to_string(skipped) + " non-line WKT geometries skipped");
    }
    if (warnings && rejected > 0) {
      warnings->push_back(std::to_string(rejected) + " degenerate WKT polylines rejected");
    }
    graph = build_graph(polylines, map.snap_tolerance);
  }
  if (warnings && graph.component_count() > 1) {
    warnings->push_back("map graph has " + std::to_string(graph.component_count()) +
                        " connected components");
  }
  return graph;
}

Region load_region(const std::string& spec) {
  std::string head;
  for (char c : spec.substr(0, 7)) head += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (head.starts_with("BBOX") || head.starts_with("POLYGON")) return parse_region(spec);
  return parse_region(read_text_file(spec));
}

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

}  // namespace

// Router versions at which the sender last had nothing to offer the peer.
// While neither version moves the answer cannot change, so the peer is not
// asked again. Index 0 is a -> b, index 1 is b -> a.
struct Simulation::ContactMemo {
  std::array<std::uint64_t, 2> sender_version{kNever, kNever};
  std::array<std::uint64_t, 2> receiver_version{kNever, kNever};
};

Simulation::Simulation(const ScenarioConfig& config, EventSink sink,
                       std::optional<std::vector<CreationEvent>> schedule_override)
    : config_(config),
      sink_(std::move(sink)),
      tick_(config.tick),
      last_tick_(static_cast<std::uint64_t>(std::llround(config.end_time / config.tick))),
      sample_every_(std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::llround(config.report_interval / config.tick)))),
      links_(config.total_nodes(), config.link) {
  config_.validate();
  const std::size_t n = config_.total_nodes();

  const auto full = std::make_shared<const RoadGraph>(load_map(config_.map, &warnings_));
  for (const GroupConfig* g : {&config_.group1, &config_.group2}) {
    if (g->region.empty()) {
      graphs_.push_back(full);
    } else {
      graphs_.push_back(std::make_shared<const RoadGraph>(restrict(*full, load_region(g->region))));
    }
  }

  group_of_.resize(n);
  node_rng_.reserve(n);
  movement_.reserve(n);
  positions_.reserve(n);
  routers_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    group_of_[i] = i < config_.group1.count ? 0 : 1;
    const auto& params = group_of_[i] == 0 ? config_.group1.mobility : config_.group2.mobility;
    node_rng_.push_back(Rng::derive(config_.seed, std::uint64_t{i}));
    movement_.push_back(place_node(*graphs_[group_of_[i]], params, node_rng_.back()));
    positions_.push_back(movement_.back().position());
    routers_.push_back(make_router(config_.router));
  }

  if (schedule_override) {
    schedule_ = std::move(*schedule_override);
    for (std::size_t i = 0; i < schedule_.size(); ++i) {
      const auto& ev = schedule_[i];
      if (ev.message != i || ev.source >= n || ev.destination >= n || ev.source == ev.destination ||
          (i > 0 && ev.time < schedule_[i - 1].time)) {
        throw std::invalid_argument("invalid creation schedule at entry " + std::to_string(i));
      }
    }
  } else {
    std::vector<NodeId> noi(config_.group1.count);
    std::vector<NodeId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
    std::copy_n(all.begin(), noi.size(), noi.begin());
    Rng traffic_rng = Rng::derive(config_.seed, std::string_view{"traffic"});
    schedule_ = schedule(config_.traffic, noi, all, traffic_rng);
  }
  messages_.reserve(schedule_.size());
  for (const auto& ev : schedule_) {
    messages_.push_back({ev.message, ev.source, ev.destination, config_.traffic.message_size, ev.time,
                         config_.traffic.ttl});
  }
  if (config_.traffic.message_size > config_.router.buffer_capacity && !schedule_.empty()) {
    warnings_.push_back("message size exceeds buffer capacity; every message will be rejected");
  }
}

Simulation::~Simulation() = default;

double Simulation::now() const { return now_; }

const RoadGraph& Simulation::graph_of(NodeId n) const { return *graphs_[group_of_[n]]; }

void Simulation::run() {
  while (!done()) step();
}

void Simulation::step() {
  if (done()) throw std::logic_error("simulation already finished");
  now_ = static_cast<double>(tick_index_) * tick_;
  stamp_ = quantize_time(now_);
  if (tick_index_ > 0) advance_mobility();
  update_contacts();
  expire();
  create_due();
  transfer();
  sample_occupancy();
  ++tick_index_;
}

void Simulation::emit(EventKind kind, MessageIndex m, NodeId from, std::optional<NodeId> to) {
  ++totals_.by_kind[static_cast<std::size_t>(kind)];
  ++totals_.records;
  if (sink_) sink_(EventRecord{stamp_, kind, m, from, to});
}

void Simulation::advance_mobility() {
  for (std::size_t i = 0; i < movement_.size(); ++i) {
    const auto& params = group_of_[i] == 0 ? config_.group1.mobility : config_.group2.mobility;
    advance(movement_[i], *graphs_[group_of_[i]], params, node_rng_[i], tick_);
    positions_[i] = movement_[i].position();
  }
}

void Simulation::abort_jobs(const std::vector<TransferJob>& jobs) {
  for (const auto& job : jobs) {
    routers_[job.sender]->set_in_flight(job.message, -1);
    emit(EventKind::aborted, job.message, job.sender, job.receiver);
  }
}

void Simulation::update_contacts() {
  std::vector<NodePair> current = detect(positions_, config_.link.range);
  const ContactDiff diff = contact_diff(contacts_, current);
  for (const auto& pair : diff.down) abort_jobs(links_.abort_pair(pair));

  // Carry memos of persisting contacts over to the new list.
  std::vector<ContactMemo> memos(current.size());
  for (std::size_t i = 0, j = 0; i < contacts_.size() && j < current.size();) {
    if (contacts_[i] < current[j]) {
      ++i;
    } else if (current[j] < contacts_[i]) {
      ++j;
    } else {
      memos[j++] = memos_[i++];
    }
  }
  contacts_ = std::move(current);
  memos_ = std::move(memos);
}

void Simulation::expire() {
  for (std::size_t i = 0; i < routers_.size(); ++i) {
    const auto node = static_cast<NodeId>(i);
    for (const Drop& d : routers_[i]->tick_expiry(now_)) {
      emit(d.reason == DropReason::custody ? EventKind::drop_custody : EventKind::drop_ttl, d.message,
           node);
      abort_jobs(links_.abort_sender_message(node, d.message));
    }
  }
}

void Simulation::create_due() {
  while (next_creation_ < schedule_.size() && reached(now_, schedule_[next_creation_].time)) {
    const CreationEvent& ev = schedule_[next_creation_++];
    Message& msg = messages_[ev.message];
    msg.created_at = stamp_;
    ++totals_.messages;
    Router& creator = *routers_[ev.source];
    const ReceiptOutcome out = creator.create_local(msg, now_);
    switch (out.status) {
      case ReceiptStatus::accepted:
        for (MessageIndex victim : out.evicted) emit(EventKind::drop_buffer, victim, ev.source);
        emit(EventKind::create, msg.id, ev.source);
        break;
      case ReceiptStatus::rejected_too_large:
        emit(EventKind::create, msg.id, ev.source);
        if (creator.note_too_large(msg.id)) {
          emit(EventKind::reject_too_large, msg.id, ev.source, ev.source);
        }
        break;
      case ReceiptStatus::rejected_no_space:
        emit(EventKind::create, msg.id, ev.source);
        emit(EventKind::aborted, msg.id, ev.source, ev.source);
        break;
    }
  }
}

void Simulation::deliver(const TransferJob& job, bool carried) {
  Router& sender = *routers_[job.sender];
  if (carried) sender.set_in_flight(job.message, -1);
  Router& receiver = *routers_[job.receiver];
  const ReceiptOutcome out = receiver.on_receive(messages_[job.message], now_);
  switch (out.status) {
    case ReceiptStatus::accepted:
      for (MessageIndex victim : out.evicted) emit(EventKind::drop_buffer, victim, job.receiver);
      emit(EventKind::received, job.message, job.sender, job.receiver);
      sender.on_delivered(job.message);
      break;
    case ReceiptStatus::rejected_too_large:
      emit(EventKind::aborted, job.message, job.sender, job.receiver);
      if (receiver.note_too_large(job.message)) {
        emit(EventKind::reject_too_large, job.message, job.sender, job.receiver);
      }
      break;
    case ReceiptStatus::rejected_no_space:
      emit(EventKind::aborted, job.message, job.sender, job.receiver);
      break;
  }
}

void Simulation::transfer() {
  links_.begin_tick(tick_);
  auto progress = links_.progress_transfers(contacts_);
  abort_jobs(progress.aborted);
  for (const auto& job : progress.completed) deliver(job, true);

  // Per-node neighbour lists (ascending peer id) over the contact list.
  const std::size_t n = routers_.size();
  struct Adjacent {
    NodeId peer;
    std::uint32_t contact;
    std::uint8_t direction;
  };
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (const auto& c : contacts_) {
    ++offsets[c.a + 1];
    ++offsets[c.b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<Adjacent> adjacent(offsets[n]);
  {
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t ci = 0; ci < contacts_.size(); ++ci) {
      const auto& c = contacts_[ci];
      adjacent[fill[c.a]++] = {c.b, ci, 0};
      adjacent[fill[c.b]++] = {c.a, ci, 1};
    }
  }

  // First Contact hands a message to whichever wanting peer comes first, so
  // a peer with no offers may still want something; no memo there.
  const bool use_memo = config_.router.kind != RouterKind::first_contact;
  std::vector<Peer> peers;
  std::vector<std::pair<const Adjacent*, std::uint64_t>> asked;
  std::vector<char> offered;
  for (std::size_t i = 0; i < n; ++i) {
    const auto sender_id = static_cast<NodeId>(i);
    Router& sender = *routers_[i];
    if (offsets[i] == offsets[i + 1] || sender.buffer().empty() || !links_.can_send(sender_id)) {
      continue;
    }
    peers.clear();
    asked.clear();
    const std::uint64_t sender_version = sender.version();
    for (std::uint32_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      const Adjacent& adj = adjacent[k];
      const Router& peer = *routers_[adj.peer];
      const ContactMemo& memo = memos_[adj.contact];
      if (use_memo && memo.sender_version[adj.direction] == sender_version &&
          memo.receiver_version[adj.direction] == peer.version()) {
        continue;
      }
      peers.push_back({adj.peer, &peer});
      asked.emplace_back(&adj, peer.version());
    }
    if (peers.empty()) continue;

    offers_.clear();
    sender.select_transfers(peers, messages_, now_, offers_);
    if (use_memo) {
      offered.assign(peers.size(), 0);
      for (const Offer& o : offers_) {
        const auto it = std::lower_bound(peers.begin(), peers.end(), o.receiver,
                                         [](const Peer& p, NodeId id) { return p.id < id; });
        offered[static_cast<std::size_t>(it - peers.begin())] = 1;
      }
      for (std::size_t k = 0; k < asked.size(); ++k) {
        const auto& [adj, peer_version] = asked[k];
        ContactMemo& memo = memos_[adj->contact];
        memo.sender_version[adj->direction] = offered[k] ? kNever : sender_version;
        memo.receiver_version[adj->direction] = offered[k] ? kNever : peer_version;
      }
    }

    for (const Offer& offer : offers_) {
      if (!links_.can_send(sender_id)) break;
      const MessageIndex m = offer.message;
      const NodeId to = offer.receiver;
      Router& receiver = *routers_[to];
      if (!sender.buffer().contains(m) || !receiver.wants(m, now_) || links_.incoming(to, m)) continue;
      const Message& msg = messages_[m];
      if (msg.size > receiver.buffer().capacity()) {
        if (receiver.note_too_large(m)) emit(EventKind::reject_too_large, m, sender_id, to);
        continue;
      }
      if (!links_.can_receive(to)) continue;
      switch (links_.start(m, msg.size, sender_id, to, now_)) {
        case LinkScheduler::StartOutcome::busy:
          break;
        case LinkScheduler::StartOutcome::completed:
          emit(EventKind::send_start, m, sender_id, to);
          deliver(TransferJob{m, sender_id, to, 0.0, msg.size, now_}, false);
          break;
        case LinkScheduler::StartOutcome::in_progress:
          emit(EventKind::send_start, m, sender_id, to);
          sender.set_in_flight(m, +1);
          break;
      }
    }
  }
}

void Simulation::sample_occupancy() {
  if (tick_index_ % sample_every_ != 0) return;
  long double occupied = 0.0L;
  long double capacity = 0.0L;
  for (const auto& r : routers_) {
    occupied += static_cast<long double>(r->buffer().occupied());
    capacity += static_cast<long double>(r->buffer().capacity());
  }
  const double pct = capacity > 0 ? static_cast<double>(100.0L * occupied / capacity) : 0.0;
  occupancy_.push_back({stamp_, pct});
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

// Buffered log writer that also keeps the digest of everything written.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write event log '" + path.string() + "'");
    buffer_.reserve(kFlushAt + 256);
  }
  void operator()(const EventRecord& r) {
    const std::size_t before = buffer_.size();
    format_record(r, buffer_);
    digest_.update(std::string_view(buffer_).substr(before));
    if (buffer_.size() >= kFlushAt) flush();
  }
  void flush() {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_.clear();
    if (!out_) throw std::runtime_error("failed writing event log '" + path_.string() + "'");
  }
  std::string digest() const { return digest_.hex(); }

 private:
  static constexpr std::size_t kFlushAt = 1 << 20;
  std::filesystem::path path_;
  std::ofstream out_;
  std::string buffer_;
  Fnv1a digest_;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

RunSummary run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunSummary summary;
  summary.directory = out_dir;

  LogWriter writer(out_dir / "event.log");
  Simulation sim(config, [&writer](const EventRecord& r) { writer(r); });
  sim.run();
  writer.flush();

  std::string csv = "time,mean_occupancy_pct\n";
  for (const auto& s : sim.occupancy()) {
    csv += fixed(s.time, 4) + "," + fixed(s.mean_occupancy_pct, 6) + "\n";
    summary.max_mean_occupancy_pct = std::max(summary.max_mean_occupancy_pct, s.mean_occupancy_pct);
  }
  write_file(out_dir / "occupancy.csv", csv);

  summary.totals = sim.totals();
  summary.log_digest = writer.digest();
  summary.warnings = sim.warnings();

  std::string manifest;
  auto line = [&manifest](std::string_view key, const std::string& value) {
    manifest.append(key).append(" = ").append(value).append("\n");
  };
  line("seed", std::to_string(config.seed));
  line("config_hash", config.config_hash());
  line("nodes", std::to_string(config.total_nodes()));
  line("router", std::string(to_string(config.router.kind)));
  line("buffer_capacity", std::to_string(config.router.buffer_capacity));
  line("end_time", fixed(config.end_time, 4));
  line("tick", fixed(config.tick, 4));
  line("messages", std::to_string(summary.totals.messages));
  line("records", std::to_string(summary.totals.records));
  for (std::size_t k = 0; k < summary.totals.by_kind.size(); ++k) {
    line("count." + std::string(to_string(static_cast<EventKind>(k))),
         std::to_string(summary.totals.by_kind[k]));
  }
  line("max_mean_occupancy_pct", fixed(summary.max_mean_occupancy_pct, 6));
  line("event_log_fnv1a", summary.log_digest);
  for (const auto& w : summary.warnings) line("warning", w);
  for (const auto& [k, v] : config.assignments) line("config." + k, v);
  write_file(out_dir / "manifest.txt", manifest);
  return summary;
}

}  // namespace dtnsat
