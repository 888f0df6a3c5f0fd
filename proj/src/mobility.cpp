#include "dtnsat/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtnsat {

void MobilityParams::validate() const {
  if (!(speed_min > 0.0) || !(speed_min <= speed_max) || !std::isfinite(speed_max)) {
    throw std::invalid_argument("mobility: require 0 < speed_min <= speed_max");
  }
  if (!(wait_min >= 0.0) || !(wait_min <= wait_max) || !std::isfinite(wait_max)) {
    throw std::invalid_argument("mobility: require 0 <= wait_min <= wait_max");
  }
}

std::vector<VertexId> MovementState::remaining_path() const {
  if (waiting()) return {};
  return {path_.begin() + static_cast<std::ptrdiff_t>(next_), path_.end()};
}

std::optional<VertexId> MovementState::destination() const {
  if (waiting()) return std::nullopt;
  return path_.back();
}

namespace {

double draw_wait(const MobilityParams& p, Rng& rng) { return rng.uniform(p.wait_min, p.wait_max); }

}  // namespace

MovementState place_node(const RoadGraph& graph, const MobilityParams& params, Rng& rng) {
  if (graph.vertex_count() == 0) throw MapError("movement graph is empty");
  MovementState s;
  s.vertex_ = static_cast<VertexId>(rng.below(graph.vertex_count()));
  s.position_ = graph.vertex(s.vertex_);
  s.wait_remaining_ = draw_wait(params, rng);
  return s;
}

std::vector<MovementState> init_positions(const RoadGraph& graph, const MobilityParams& params,
                                          std::size_t count, Rng& rng) {
  if (graph.vertex_count() == 0) throw MapError("movement graph is empty");
  std::vector<MovementState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(place_node(graph, params, rng));
  return out;
}

bool choose_destination(MovementState& s, const RoadGraph& graph, const MobilityParams& params,
                        Rng& rng) {
  const auto members = graph.component_members(graph.component_of(s.vertex_));
  if (members.size() < 2) {
    s.wait_remaining_ = draw_wait(params, rng);
    return false;
  }
  const auto self = static_cast<std::size_t>(
      std::lower_bound(members.begin(), members.end(), s.vertex_) - members.begin());
  auto pick = static_cast<std::size_t>(rng.below(members.size() - 1));
  if (pick >= self) ++pick;
  const VertexId dst = members[pick];

  auto path = shortest_path(graph, s.vertex_, dst);
  if (!path) throw MapError("destination in same component is unreachable");
  s.path_ = std::move(path->vertices);
  s.next_ = 1;
  s.offset_ = 0.0;
  s.edge_length_ = distance(graph.vertex(s.path_[0]), graph.vertex(s.path_[1]));
  s.leg_speed_ = rng.uniform(params.speed_min, params.speed_max);
  s.wait_remaining_.reset();
  ++s.legs_started_;
  return true;
}

void advance(MovementState& s, const RoadGraph& graph, const MobilityParams& params, Rng& rng,
             double dt) {
  double budget = dt;
  while (budget > 0.0) {
    if (s.wait_remaining_) {
      if (*s.wait_remaining_ > budget) {
        *s.wait_remaining_ -= budget;
        return;
      }
      budget -= *s.wait_remaining_;
      if (!choose_destination(s, graph, params, rng) && *s.wait_remaining_ <= 0.0) {
        // Isolated vertex with zero pause: retry on the next step.
        return;
      }
      continue;
    }

    const double left_on_edge = s.edge_length_ - s.offset_;
    const double reach = s.leg_speed_ * budget;
    const GeoPoint& from = graph.vertex(s.path_[s.next_ - 1]);
    const GeoPoint& to = graph.vertex(s.path_[s.next_]);
    if (reach < left_on_edge) {
      s.offset_ += reach;
      s.position_ = lerp(from, to, s.offset_ / s.edge_length_);
      return;
    }
    budget -= left_on_edge / s.leg_speed_;
    s.vertex_ = s.path_[s.next_];
    s.position_ = to;
    ++s.next_;
    if (s.next_ == s.path_.size()) {
      s.path_.clear();
      s.next_ = 0;
      s.offset_ = 0.0;
      s.edge_length_ = 0.0;
      s.wait_remaining_ = draw_wait(params, rng);
    } else {
      s.offset_ = 0.0;
      s.edge_length_ = distance(to, graph.vertex(s.path_[s.next_]));
    }
  }
}

MovementState moving_state_for_test(const RoadGraph& graph, std::vector<VertexId> path,
                                    double speed) {
  if (path.size() < 2) throw std::invalid_argument("path needs two vertices");
  MovementState s;
  s.vertex_ = path.front();
  s.position_ = graph.vertex(path.front());
  s.path_ = std::move(path);
  s.next_ = 1;
  s.edge_length_ = distance(graph.vertex(s.path_[0]), graph.vertex(s.path_[1]));
  s.leg_speed_ = speed;
  return s;
}

}  // namespace dtnsat
