#include "dtnsat/contacts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtnsat {

void LinkParams::validate() const {
  if (!(range > 0.0) || !std::isfinite(range)) throw std::invalid_argument("link range must be > 0");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("link bandwidth must be > 0");
  }
}

std::vector<NodePair> detect(std::span<const GeoPoint> positions, double range) {
  std::vector<NodePair> pairs;
  const std::size_t n = positions.size();
  if (n < 2) return pairs;

  double min_x = positions[0].x;
  double min_y = positions[0].y;
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("detect: non-finite position");
    }
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
  }

  // Slightly oversized cells so rounding can never put an in-range pair two
  // cells apart.
  const double cell = range * (1.0 + 1e-9);
  struct Entry {
    std::uint64_t key;
    NodeId node;
    std::uint32_t cx, cy;
  };
  std::vector<Entry> entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cx = static_cast<std::uint32_t>(std::floor((positions[i].x - min_x) / cell));
    const auto cy = static_cast<std::uint32_t>(std::floor((positions[i].y - min_y) / cell));
    entries[i] = {(std::uint64_t{cx} << 32) | cy, static_cast<NodeId>(i), cx, cy};
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
    return l.key != r.key ? l.key < r.key : l.node < r.node;
  });

  auto cell_range = [&](std::uint32_t cx, std::uint32_t cy) {
    const std::uint64_t key = (std::uint64_t{cx} << 32) | cy;
    auto lo = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const Entry& e, std::uint64_t k) { return e.key < k; });
    auto hi = lo;
    while (hi != entries.end() && hi->key == key) ++hi;
    return std::pair{lo, hi};
  };

  const double r2 = range * range;
  auto consider = [&](NodeId x, NodeId y) {
    if (distance_squared(positions[x], positions[y]) <= r2) pairs.push_back(NodePair::of(x, y));
  };

  for (auto it = entries.begin(); it != entries.end();) {
    auto end = it;
    while (end != entries.end() && end->key == it->key) ++end;
    const std::uint32_t cx = it->cx;
    const std::uint32_t cy = it->cy;
    for (auto a = it; a != end; ++a) {
      for (auto b = a + 1; b != end; ++b) consider(a->node, b->node);
    }
    // Half of the 8-neighbourhood so each cell pair is visited once.
    const std::pair<std::int64_t, std::int64_t> offsets[] = {{1, -1}, {1, 0}, {1, 1}, {0, 1}};
    for (const auto& [dx, dy] : offsets) {
      const std::int64_t nx = std::int64_t{cx} + dx;
      const std::int64_t ny = std::int64_t{cy} + dy;
      if (ny < 0) continue;
      const auto [lo, hi] = cell_range(static_cast<std::uint32_t>(nx), static_cast<std::uint32_t>(ny));
      for (auto a = it; a != end; ++a) {
        for (auto b = lo; b != hi; ++b) consider(a->node, b->node);
      }
    }
    it = end;
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ContactDiff contact_diff(std::span<const NodePair> previous, std::span<const NodePair> current) {
  ContactDiff diff;
  std::set_difference(current.begin(), current.end(), previous.begin(), previous.end(),
                      std::back_inserter(diff.up));
  std::set_difference(previous.begin(), previous.end(), current.begin(), current.end(),
                      std::back_inserter(diff.down));
  return diff;
}

LinkScheduler::LinkScheduler(std::size_t node_count, LinkParams params)
    : params_(params), used_(node_count, 0.0), locked_(node_count, 0) {
  params_.validate();
}

void LinkScheduler::begin_tick(double dt) {
  if (dt < 0.0) throw std::invalid_argument("negative tick length");
  budget_ = params_.bandwidth * dt;
  std::fill(used_.begin(), used_.end(), 0.0);
}

bool LinkScheduler::can_send(NodeId node) const {
  return locked_[node] == 0 && used_[node] < budget_;
}

bool LinkScheduler::can_receive(NodeId node) const {
  if (!params_.exclusive_endpoints) return true;
  return locked_[node] == 0 && used_[node] < budget_;
}

void LinkScheduler::lock(const TransferJob& job, int delta) {
  locked_[job.sender] += delta;
  if (params_.exclusive_endpoints) locked_[job.receiver] += delta;
}

LinkScheduler::Progress LinkScheduler::progress_transfers(std::span<const NodePair> contacts) {
  Progress out;
  std::vector<TransferJob> keep;
  for (auto& job : jobs_) {
    const NodePair pair = NodePair::of(job.sender, job.receiver);
    if (!std::binary_search(contacts.begin(), contacts.end(), pair)) {
      lock(job, -1);
      out.aborted.push_back(job);
      continue;
    }
    double start = used_[job.sender];
    if (params_.exclusive_endpoints) start = std::max(start, used_[job.receiver]);
    const double moved = std::min(job.bytes_remaining, std::max(0.0, budget_ - start));
    job.bytes_remaining -= moved;
    used_[job.sender] = start + moved;
    if (params_.exclusive_endpoints) used_[job.receiver] = start + moved;
    if (job.bytes_remaining <= 0.0) {
      job.bytes_remaining = 0.0;
      lock(job, -1);
      out.completed.push_back(job);
    } else {
      out.ongoing.push_back(job);
      keep.push_back(job);
    }
  }
  jobs_ = std::move(keep);
  return out;
}

LinkScheduler::StartOutcome LinkScheduler::start(MessageIndex message, Bytes size, NodeId sender,
                                                 NodeId receiver, double now) {
  if (!can_send(sender) || !can_receive(receiver)) return StartOutcome::busy;
  double start = used_[sender];
  if (params_.exclusive_endpoints) start = std::max(start, used_[receiver]);
  const double available = budget_ - start;
  if (available <= 0.0) return StartOutcome::busy;

  const auto bytes = static_cast<double>(size);
  if (bytes <= available) {
    used_[sender] = start + bytes;
    if (params_.exclusive_endpoints) used_[receiver] = start + bytes;
    return StartOutcome::completed;
  }
  TransferJob job{message, sender, receiver, bytes - available, size, now};
  used_[sender] = budget_;
  if (params_.exclusive_endpoints) used_[receiver] = budget_;
  lock(job, +1);
  auto pos = std::upper_bound(jobs_.begin(), jobs_.end(), job, [](const auto& l, const auto& r) {
    return std::pair{l.sender, l.receiver} < std::pair{r.sender, r.receiver};
  });
  jobs_.insert(pos, job);
  return StartOutcome::in_progress;
}

std::vector<TransferJob> LinkScheduler::extract_if(auto pred) {
  std::vector<TransferJob> out;
  std::vector<TransferJob> keep;
  for (const auto& job : jobs_) {
    if (pred(job)) {
      lock(job, -1);
      out.push_back(job);
    } else {
      keep.push_back(job);
    }
  }
  jobs_ = std::move(keep);
  return out;
}

std::vector<TransferJob> LinkScheduler::abort_pair(NodePair pair) {
  return extract_if([&](const TransferJob& j) { return NodePair::of(j.sender, j.receiver) == pair; });
}

std::vector<TransferJob> LinkScheduler::abort_sender_message(NodeId sender, MessageIndex message) {
  return extract_if([&](const TransferJob& j) { return j.sender == sender && j.message == message; });
}

bool LinkScheduler::incoming(NodeId receiver, MessageIndex message) const {
  return std::any_of(jobs_.begin(), jobs_.end(), [&](const TransferJob& j) {
    return j.receiver == receiver && j.message == message;
  });
}

bool LinkScheduler::sending(NodeId sender, MessageIndex message) const {
  return std::any_of(jobs_.begin(), jobs_.end(), [&](const TransferJob& j) {
    return j.sender == sender && j.message == message;
  });
}

}  // namespace dtnsat
