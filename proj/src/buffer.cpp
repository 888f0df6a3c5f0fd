#include "dtnsat/buffer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dtnsat {

namespace {
constexpr double kNever = std::numeric_limits<double>::infinity();
}

Buffer::Buffer(Bytes capacity) : capacity_(capacity), earliest_deadline_(kNever) {}

const BufferEntry* Buffer::find(MessageIndex m) const {
  if (!contains(m)) return nullptr;
  for (const auto& e : entries_) {
    if (e.message == m) return &e;
  }
  return nullptr;
}

std::optional<std::vector<MessageIndex>> Buffer::eviction_plan(Bytes size) const {
  std::vector<MessageIndex> plan;
  if (size > capacity_) return std::nullopt;
  Bytes free = free_space();
  for (const auto& e : entries_) {
    if (free >= size) break;
    if (e.in_flight > 0) continue;
    plan.push_back(e.message);
    free += e.size;
  }
  if (free < size) return std::nullopt;
  return plan;
}

void Buffer::insert(const Message& message, double now) {
  if (contains(message.id)) throw std::logic_error("buffer already holds " + message_name(message.id));
  if (message.size > free_space()) throw std::logic_error("buffer overflow");
  if (message.id >= present_.size()) present_.resize(message.id + 1, false);
  present_[message.id] = true;
  entries_.push_back({message.id, message.size, now, message.deadline(), next_seq_++, 0});
  occupied_ += message.size;
  earliest_deadline_ = std::min(earliest_deadline_, message.deadline());
}

bool Buffer::remove(MessageIndex m) {
  if (!contains(m)) return false;
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [m](const BufferEntry& e) { return e.message == m; });
  occupied_ -= it->size;
  present_[m] = false;
  entries_.erase(it);
  return true;
}

void Buffer::set_in_flight(MessageIndex m, int delta) {
  for (auto& e : entries_) {
    if (e.message == m) {
      e.in_flight += delta;
      return;
    }
  }
}

std::vector<MessageIndex> Buffer::take_expired(double now) {
  std::vector<MessageIndex> out;
  if (!reached(now, earliest_deadline_)) return out;
  earliest_deadline_ = kNever;
  auto keep = entries_.begin();
  for (auto& e : entries_) {
    if (reached(now, e.deadline)) {
      out.push_back(e.message);
      occupied_ -= e.size;
      present_[e.message] = false;
    } else {
      earliest_deadline_ = std::min(earliest_deadline_, e.deadline);
      *keep++ = e;
    }
  }
  entries_.erase(keep, entries_.end());
  return out;
}

std::vector<MessageIndex> Buffer::take_held_longer_than(double hold, double now) {
  std::vector<MessageIndex> out;
  // Receipt times are non-decreasing along the buffer.
  auto it = entries_.begin();
  while (it != entries_.end() && reached(now, it->received_at + hold)) {
    out.push_back(it->message);
    occupied_ -= it->size;
    present_[it->message] = false;
    ++it;
  }
  entries_.erase(entries_.begin(), it);
  return out;
}

}  // namespace dtnsat
