#include "dtnsat/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtnsat {

void TrafficPattern::validate() const {
  if (kind == TrafficKind::periodic &&
      (!(interval_min > 0.0) || !(interval_min <= interval_max) || !std::isfinite(interval_max))) {
    throw std::invalid_argument("traffic: require 0 < interval_min <= interval_max");
  }
  if (!(creation_window > 0.0) || !std::isfinite(creation_window)) {
    throw std::invalid_argument("traffic: creation window must be > 0");
  }
  if (message_size == 0) throw std::invalid_argument("traffic: message size must be > 0");
  if (!(ttl > 0.0) || !std::isfinite(ttl)) throw std::invalid_argument("traffic: ttl must be > 0");
}

TrafficPattern preset(std::string_view name) {
  TrafficPattern p;
  if (name == "one") {
    p.kind = TrafficKind::one;
  } else if (name == "moderate") {
    p.kind = TrafficKind::periodic;
    p.interval_min = p.interval_max = 300.0;
  } else if (name == "high") {
    p.kind = TrafficKind::periodic;
    p.interval_min = p.interval_max = 30.0;
  } else {
    throw std::invalid_argument("unknown traffic preset '" + std::string(name) + "'");
  }
  return p;
}

namespace {

NodeId pick_destination(NodeId source, std::span<const NodeId> all, Rng& rng) {
  // Uniform over all ids except the source.
  const auto self = std::find(all.begin(), all.end(), source);
  if (self == all.end()) return all[rng.below(all.size())];
  const auto self_pos = static_cast<std::size_t>(self - all.begin());
  auto pick = static_cast<std::size_t>(rng.below(all.size() - 1));
  if (pick >= self_pos) ++pick;
  return all[pick];
}

}  // namespace

std::vector<CreationEvent> schedule(const TrafficPattern& pattern, std::span<const NodeId> noi_ids,
                                    std::span<const NodeId> all_node_ids, Rng& rng) {
  pattern.validate();
  if (noi_ids.empty()) throw std::invalid_argument("traffic: no message sources");
  if (all_node_ids.size() < 2) throw std::invalid_argument("traffic: need at least two nodes");
  for (NodeId n : noi_ids) {
    if (std::find(all_node_ids.begin(), all_node_ids.end(), n) == all_node_ids.end()) {
      throw std::invalid_argument("traffic: source " + node_name(n) + " is not a scenario node");
    }
  }

  std::vector<CreationEvent> events;
  if (pattern.kind == TrafficKind::one) {
    events.push_back({0.0, noi_ids.front(), pick_destination(noi_ids.front(), all_node_ids, rng), 0});
    return events;
  }
  for (NodeId source : noi_ids) {
    for (double t = 0.0; t < pattern.creation_window - kTimeEpsilon;
         t += rng.uniform(pattern.interval_min, pattern.interval_max)) {
      events.push_back({t, source, pick_destination(source, all_node_ids, rng), 0});
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& l, const auto& r) {
    return l.time != r.time ? l.time < r.time : l.source < r.source;
  });
  for (std::size_t i = 0; i < events.size(); ++i) events[i].message = static_cast<MessageIndex>(i);
  return events;
}

}  // namespace dtnsat
