#include "dtnsat/router.hpp"

#include <cmath>
#include <stdexcept>

namespace dtnsat {

RouterKind parse_router_kind(std::string_view name) {
  if (name == "epidemic") return RouterKind::epidemic;
  if (name == "wave") return RouterKind::wave;
  if (name == "firstcontact") return RouterKind::first_contact;
  if (name == "directdelivery") return RouterKind::direct_delivery;
  throw std::invalid_argument("unknown router '" + std::string(name) + "'");
}

std::string_view to_string(RouterKind kind) {
  switch (kind) {
    case RouterKind::epidemic: return "epidemic";
    case RouterKind::wave: return "wave";
    case RouterKind::first_contact: return "firstcontact";
    case RouterKind::direct_delivery: return "directdelivery";
  }
  return "?";
}

void RouterParams::validate() const {
  if (buffer_capacity == 0) throw std::invalid_argument("buffer capacity must be > 0");
  if (kind == RouterKind::wave) {
    if (!(immunity_time > 0.0) || !std::isfinite(immunity_time)) {
      throw std::invalid_argument("wave immunity time must be > 0");
    }
    if (!(custody_fraction > 0.0) || custody_fraction > 1.0) {
      throw std::invalid_argument("wave custody fraction must be in (0, 1]");
    }
  }
}

bool Router::wants(MessageIndex m, double now) const {
  (void)now;
  return !buffer_.contains(m);
}

ReceiptOutcome Router::on_receive(const Message& message, double now) {
  ReceiptOutcome out;
  if (message.size > buffer_.capacity()) {
    out.status = ReceiptStatus::rejected_too_large;
    return out;
  }
  auto plan = buffer_.eviction_plan(message.size);
  if (!plan) {
    out.status = ReceiptStatus::rejected_no_space;
    return out;
  }
  for (MessageIndex victim : *plan) buffer_.remove(victim);
  out.evicted = std::move(*plan);
  buffer_.insert(message, now);
  on_accepted(message, now);
  touch();
  return out;
}

std::vector<Drop> Router::tick_expiry(double now) {
  std::vector<Drop> drops;
  for (MessageIndex m : buffer_.take_expired(now)) drops.push_back({m, DropReason::ttl});
  if (!drops.empty()) touch();
  return drops;
}

void Router::select_transfers(std::span<const Peer> peers, std::span<const Message> messages,
                              double now, std::vector<Offer>& out) const {
  (void)messages;
  for (const auto& entry : buffer_.entries()) {
    for (const auto& peer : peers) {
      if (peer.router->wants(entry.message, now)) out.push_back({entry.message, peer.id});
    }
  }
}

bool Router::note_too_large(MessageIndex m) {
  if (m >= too_large_noted_.size()) too_large_noted_.resize(m + 1, false);
  if (too_large_noted_[m]) return false;
  too_large_noted_[m] = true;
  return true;
}

bool Router::drop(MessageIndex m) {
  if (!buffer_.remove(m)) return false;
  touch();
  return true;
}

WaveRouter::WaveRouter(const RouterParams& params)
    : Router(params), immunity_(params.immunity_time), custody_(params.custody_time()) {}

bool WaveRouter::tracking(MessageIndex m, double now) const {
  return m < tracked_at_.size() && tracked_at_[m] >= 0.0 && !reached(now, tracked_at_[m] + immunity_);
}

bool WaveRouter::wants(MessageIndex m, double now) const {
  return !buffer_.contains(m) && !tracking(m, now);
}

std::vector<Drop> WaveRouter::tick_expiry(double now) {
  std::vector<Drop> drops;
  for (MessageIndex m : buffer_.take_expired(now)) drops.push_back({m, DropReason::ttl});
  for (MessageIndex m : buffer_.take_held_longer_than(custody_, now)) {
    drops.push_back({m, DropReason::custody});
  }
  bool purged = false;
  while (!tracking_order_.empty() && reached(now, tracking_order_.front().second + immunity_)) {
    tracked_at_[tracking_order_.front().first] = -1.0;
    tracking_order_.pop_front();
    purged = true;
  }
  if (!drops.empty() || purged) touch();
  return drops;
}

void WaveRouter::on_accepted(const Message& message, double now) {
  if (message.id >= tracked_at_.size()) tracked_at_.resize(message.id + 1, -1.0);
  tracked_at_[message.id] = now;
  tracking_order_.emplace_back(message.id, now);
}

void FirstContactRouter::select_transfers(std::span<const Peer> peers,
                                          std::span<const Message> messages, double now,
                                          std::vector<Offer>& out) const {
  (void)messages;
  for (const auto& entry : buffer_.entries()) {
    for (const auto& peer : peers) {
      if (peer.router->wants(entry.message, now)) {
        out.push_back({entry.message, peer.id});
        break;
      }
    }
  }
}

void FirstContactRouter::on_delivered(MessageIndex m) { drop(m); }

void DirectDeliveryRouter::select_transfers(std::span<const Peer> peers,
                                            std::span<const Message> messages, double now,
                                            std::vector<Offer>& out) const {
  for (const auto& entry : buffer_.entries()) {
    const NodeId dst = messages[entry.message].destination;
    for (const auto& peer : peers) {
      if (peer.id == dst && peer.router->wants(entry.message, now)) {
        out.push_back({entry.message, peer.id});
      }
    }
  }
}

std::unique_ptr<Router> make_router(const RouterParams& params) {
  params.validate();
  switch (params.kind) {
    case RouterKind::epidemic: return std::make_unique<EpidemicRouter>(params);
    case RouterKind::wave: return std::make_unique<WaveRouter>(params);
    case RouterKind::first_contact: return std::make_unique<FirstContactRouter>(params);
    case RouterKind::direct_delivery: return std::make_unique<DirectDeliveryRouter>(params);
  }
  throw std::invalid_argument("unknown router kind");
}

}  // namespace dtnsat
