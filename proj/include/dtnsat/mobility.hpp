#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dtnsat/geometry.hpp"
#include "dtnsat/rng.hpp"
#include "dtnsat/road_graph.hpp"

namespace dtnsat {

// Pedestrian walking and pause ranges (m/s and s).
struct MobilityParams {
  double speed_min = 1.31;
  double speed_max = 1.72;
  double wait_min = 0.0;
  double wait_max = 120.0;

  void validate() const;
};

// Shortest-path map-based movement of one node. A node is either waiting at a
// vertex or walking a Dijkstra path at a speed fixed for the whole leg.
class MovementState {
 public:
  const GeoPoint& position() const { return position_; }
  bool waiting() const { return wait_remaining_.has_value(); }
  double wait_remaining() const { return wait_remaining_.value_or(0.0); }
  double leg_speed() const { return leg_speed_; }
  // Vertex the node is parked at (only meaningful while waiting).
  VertexId vertex() const { return vertex_; }
  // Remaining vertices to visit, starting with the one being approached.
  std::vector<VertexId> remaining_path() const;
  std::optional<VertexId> destination() const;
  std::size_t legs_started() const { return legs_started_; }

 private:
  friend MovementState place_node(const RoadGraph&, const MobilityParams&, Rng&);
  friend bool choose_destination(MovementState&, const RoadGraph&, const MobilityParams&, Rng&);
  friend void advance(MovementState&, const RoadGraph&, const MobilityParams&, Rng&, double);
  friend MovementState moving_state_for_test(const RoadGraph&, std::vector<VertexId>, double);

  GeoPoint position_;
  VertexId vertex_ = 0;
  std::vector<VertexId> path_;
  std::size_t next_ = 0;       // index in path_ of the vertex being approached
  double offset_ = 0.0;        // meters travelled along the current edge
  double edge_length_ = 0.0;
  double leg_speed_ = 0.0;
  std::optional<double> wait_remaining_;
  std::size_t legs_started_ = 0;
};

// Uniformly random vertex of the graph, waiting for a uniform pause.
MovementState place_node(const RoadGraph& graph, const MobilityParams& params, Rng& rng);

std::vector<MovementState> init_positions(const RoadGraph& graph, const MobilityParams& params,
                                          std::size_t count, Rng& rng);

// Picks a uniformly random other vertex of the node's connected component and
// starts walking there. Returns false (and starts a fresh pause) if the
// component has no other vertex.
bool choose_destination(MovementState& state, const RoadGraph& graph,
                        const MobilityParams& params, Rng& rng);

// Moves the node forward by dt seconds. Pauses that expire mid-step start the
// next leg with the leftover time; arrival mid-step spends the rest waiting.
void advance(MovementState& state, const RoadGraph& graph, const MobilityParams& params, Rng& rng,
             double dt);

// Walking state at path.front() with the given speed; for kinematics tests.
MovementState moving_state_for_test(const RoadGraph& graph, std::vector<VertexId> path,
                                    double speed);

}  // namespace dtnsat
