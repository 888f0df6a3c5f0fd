#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtnsat/message.hpp"

namespace dtnsat {

struct BufferEntry {
  MessageIndex message = 0;
  Bytes size = 0;
  double received_at = 0.0;
  double deadline = 0.0;    // created_at + ttl
  std::uint64_t seq = 0;    // receipt order; breaks ties between equal times
  int in_flight = 0;        // outgoing transfers currently carrying this entry
};

// Byte-bounded message store kept in receipt order (oldest first).
class Buffer {
 public:
  explicit Buffer(Bytes capacity);

  Bytes capacity() const { return capacity_; }
  Bytes occupied() const { return occupied_; }
  Bytes free_space() const { return capacity_ - occupied_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const BufferEntry> entries() const { return entries_; }

  bool contains(MessageIndex m) const { return m < present_.size() && present_[m]; }
  const BufferEntry* find(MessageIndex m) const;

  // Oldest-first entries that must go to fit `size` bytes, skipping in-flight
  // entries. Absent if the message cannot fit even after evicting all of them.
  std::optional<std::vector<MessageIndex>> eviction_plan(Bytes size) const;

  void insert(const Message& message, double now);
  bool remove(MessageIndex m);
  void set_in_flight(MessageIndex m, int delta);

  // Removes and returns entries whose deadline <= now (in buffer order).
  std::vector<MessageIndex> take_expired(double now);
  // Removes and returns entries with received_at + hold <= now.
  std::vector<MessageIndex> take_held_longer_than(double hold, double now);

 private:
  Bytes capacity_;
  Bytes occupied_ = 0;
  std::uint64_t next_seq_ = 0;
  std::vector<BufferEntry> entries_;
  std::vector<bool> present_;
  double earliest_deadline_;
};

}  // namespace dtnsat
