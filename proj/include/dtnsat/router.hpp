#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtnsat/buffer.hpp"
#include "dtnsat/message.hpp"

namespace dtnsat {

enum class RouterKind { epidemic, wave, first_contact, direct_delivery };

RouterKind parse_router_kind(std::string_view name);
std::string_view to_string(RouterKind kind);

struct RouterParams {
  RouterKind kind = RouterKind::epidemic;
  Bytes buffer_capacity = 500'000;
  double immunity_time = 9000.0;   // wave only
  double custody_fraction = 0.5;   // wave only, in (0, 1]

  double custody_time() const { return custody_fraction * immunity_time; }
  void validate() const;
};

enum class DropReason { buffer, ttl, custody };

struct Drop {
  MessageIndex message;
  DropReason reason;
};

enum class ReceiptStatus { accepted, rejected_too_large, rejected_no_space };

struct ReceiptOutcome {
  ReceiptStatus status = ReceiptStatus::accepted;
  std::vector<MessageIndex> evicted;  // oldest first
};

class Router;

struct Peer {
  NodeId id;
  const Router* router;
};

struct Offer {
  MessageIndex message;
  NodeId receiver;
};

// Store-carry-forward router state of one node. The summary-vector exchange
// is modelled by querying the peer's wants() directly.
class Router {
 public:
  explicit Router(const RouterParams& params) : buffer_(params.buffer_capacity) {}
  virtual ~Router() = default;
  Router(const Router&) = delete;
  Router& operator=(const Router&) = delete;

  virtual RouterKind kind() const = 0;

  const Buffer& buffer() const { return buffer_; }

  virtual bool wants(MessageIndex m, double now) const;

  // Admits a message, evicting the oldest entries that are not in flight
  // until it fits.
  ReceiptOutcome on_receive(const Message& message, double now);

  // The creator stores its own message as if it had received it.
  ReceiptOutcome create_local(const Message& message, double now) { return on_receive(message, now); }

  // Drops whatever expired at `now`.
  virtual std::vector<Drop> tick_expiry(double now);

  // Appends the (message, receiver) pairs this node would send to `peers`
  // (sorted by id), in buffer order then peer order.
  virtual void select_transfers(std::span<const Peer> peers, std::span<const Message> messages,
                                double now, std::vector<Offer>& out) const;

  // Called on the sender when a transfer of m completes.
  virtual void on_delivered(MessageIndex m) { (void)m; }

  void set_in_flight(MessageIndex m, int delta) { buffer_.set_in_flight(m, delta); }

  // Returns true the first time a too-large rejection is noted for m.
  bool note_too_large(MessageIndex m);

  // Changes whenever the buffer or the set of wanted messages changes.
  std::uint64_t version() const { return version_; }

 protected:
  virtual void on_accepted(const Message& message, double now) {
    (void)message;
    (void)now;
  }
  bool drop(MessageIndex m);
  void touch() { ++version_; }

  Buffer buffer_;

 private:
  std::uint64_t version_ = 0;
  std::vector<bool> too_large_noted_;
};

class EpidemicRouter final : public Router {
 public:
  using Router::Router;
  RouterKind kind() const override { return RouterKind::epidemic; }
};

// Epidemic plus a tracking list: a message seen within the immunity time is
// refused even after it has left the buffer, and buffered messages are
// released after the custody time.
class WaveRouter final : public Router {
 public:
  explicit WaveRouter(const RouterParams& params);
  RouterKind kind() const override { return RouterKind::wave; }

  bool wants(MessageIndex m, double now) const override;
  std::vector<Drop> tick_expiry(double now) override;

  bool tracking(MessageIndex m, double now) const;
  std::size_t tracking_size() const { return tracking_order_.size(); }
  double immunity_time() const { return immunity_; }
  double custody_time() const { return custody_; }

 protected:
  void on_accepted(const Message& message, double now) override;

 private:
  double immunity_;
  double custody_;
  std::vector<double> tracked_at_;  // negative when absent
  std::deque<std::pair<MessageIndex, double>> tracking_order_;
};

// Hands each message to the first peer that wants it and forgets it once sent.
class FirstContactRouter final : public Router {
 public:
  using Router::Router;
  RouterKind kind() const override { return RouterKind::first_contact; }
  void select_transfers(std::span<const Peer> peers, std::span<const Message> messages, double now,
                        std::vector<Offer>& out) const override;
  void on_delivered(MessageIndex m) override;
};

// Sends a message only to its destination.
class DirectDeliveryRouter final : public Router {
 public:
  using Router::Router;
  RouterKind kind() const override { return RouterKind::direct_delivery; }
  void select_transfers(std::span<const Peer> peers, std::span<const Message> messages, double now,
                        std::vector<Offer>& out) const override;
};

std::unique_ptr<Router> make_router(const RouterParams& params);

}  // namespace dtnsat
