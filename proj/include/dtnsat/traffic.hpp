#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dtnsat/message.hpp"
#include "dtnsat/rng.hpp"
#include "dtnsat/types.hpp"

namespace dtnsat {

enum class TrafficKind { one, periodic };

struct TrafficPattern {
  TrafficKind kind = TrafficKind::one;
  double interval_min = 0.0;  // seconds between creations at one NOI
  double interval_max = 0.0;
  double creation_window = 3600.0;  // no creation at or after this time
  Bytes message_size = kDefaultMessageSize;
  double ttl = kDefaultTtl;

  void validate() const;
};

// "one", "moderate" (every 300 s per NOI) or "high" (every 30 s per NOI).
TrafficPattern preset(std::string_view name);

struct CreationEvent {
  double time = 0.0;
  NodeId source = 0;
  NodeId destination = 0;
  MessageIndex message = 0;  // assigned in schedule order
};

// Creation events sorted by time, then source. Destinations are uniform over
// all nodes except the source.
std::vector<CreationEvent> schedule(const TrafficPattern& pattern, std::span<const NodeId> noi_ids,
                                    std::span<const NodeId> all_node_ids, Rng& rng);

}  // namespace dtnsat
