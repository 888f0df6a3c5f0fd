#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "dtnsat/geometry.hpp"
#include "dtnsat/types.hpp"

namespace dtnsat {

struct LinkParams {
  double range = 10.0;            // meters
  double bandwidth = 1'400'000.0;  // bytes per second
  // When true a node is busy while it is either sender or receiver of a
  // transfer; when false only the sender side is exclusive.
  bool exclusive_endpoints = true;

  void validate() const;
};

// Unordered node pair stored with a < b.
struct NodePair {
  NodeId a = 0;
  NodeId b = 0;

  static NodePair of(NodeId x, NodeId y) { return x < y ? NodePair{x, y} : NodePair{y, x}; }
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// All pairs with distance <= range, sorted by (a, b). Uses a uniform grid with
// cell size equal to the range.
std::vector<NodePair> detect(std::span<const GeoPoint> positions, double range);

struct ContactDiff {
  std::vector<NodePair> up;
  std::vector<NodePair> down;
};

// Both inputs sorted; outputs sorted.
ContactDiff contact_diff(std::span<const NodePair> previous, std::span<const NodePair> current);

struct TransferJob {
  MessageIndex message = 0;
  NodeId sender = 0;
  NodeId receiver = 0;
  double bytes_remaining = 0.0;
  Bytes size = 0;
  double started_at = 0.0;
};

// Per-tick byte budgets and multi-tick transfer jobs. Each node has a cursor
// marking how much of this tick's budget (bandwidth * dt) it has already used;
// a transfer starts at the later of its endpoints' cursors, so a node's
// transfers within a tick run back to back and never exceed the budget.
class LinkScheduler {
 public:
  LinkScheduler(std::size_t node_count, LinkParams params);

  struct Progress {
    std::vector<TransferJob> completed;
    std::vector<TransferJob> aborted;
    std::vector<TransferJob> ongoing;
  };

  enum class StartOutcome { completed, in_progress, busy };

  void begin_tick(double dt);
  double tick_budget() const { return budget_; }

  // Advances jobs carried over from earlier ticks, in sender order. Jobs whose
  // pair is no longer in contacts (sorted) are aborted without progress.
  Progress progress_transfers(std::span<const NodePair> contacts);

  // Starts a new transfer now. A transfer that fits in the remaining budget
  // completes immediately; otherwise it is carried as a job.
  StartOutcome start(MessageIndex message, Bytes size, NodeId sender, NodeId receiver,
                     double now);

  bool can_send(NodeId node) const;
  bool can_receive(NodeId node) const;
  bool locked(NodeId node) const { return locked_[node] > 0; }
  double used(NodeId node) const { return used_[node]; }

  std::vector<TransferJob> abort_pair(NodePair pair);
  std::vector<TransferJob> abort_sender_message(NodeId sender, MessageIndex message);
  bool incoming(NodeId receiver, MessageIndex message) const;
  bool sending(NodeId sender, MessageIndex message) const;
  std::span<const TransferJob> jobs() const { return jobs_; }

 private:
  void lock(const TransferJob& job, int delta);
  std::vector<TransferJob> extract_if(auto pred);

  LinkParams params_;
  double budget_ = 0.0;
  std::vector<double> used_;
  std::vector<int> locked_;
  std::vector<TransferJob> jobs_;  // sorted by (sender, receiver)
};

}  // namespace dtnsat
