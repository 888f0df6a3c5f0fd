#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtnsat/geometry.hpp"

namespace dtnsat {

using VertexId = std::uint32_t;

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double length = 0.0;
};

struct Path {
  std::vector<VertexId> vertices;
  double length = 0.0;
};

// Undirected geometric graph of walkable map segments. Immutable once built.
class RoadGraph {
 public:
  struct Neighbor {
    VertexId vertex;
    double length;
  };

  RoadGraph() = default;
  RoadGraph(std::vector<GeoPoint> vertices, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const GeoPoint& vertex(VertexId v) const { return vertices_[v]; }
  std::span<const GeoPoint> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId v) const;

  std::size_t component_count() const { return component_members_.size(); }
  std::uint32_t component_of(VertexId v) const { return component_[v]; }
  // Vertices of a component in ascending order.
  std::span<const VertexId> component_members(std::uint32_t c) const {
    return component_members_[c];
  }

  double total_edge_length() const;

 private:
  std::vector<GeoPoint> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint32_t> component_;
  std::vector<std::vector<VertexId>> component_members_;
};

constexpr double kDefaultSnapTolerance = 0.1;

// Every polyline segment becomes an edge. Points within snap_tolerance of an
// already-created vertex reuse it; segments that collapse to a point are
// dropped. Throws MapError when no usable geometry remains.
RoadGraph build_graph(std::span<const Polyline> polylines,
                      double snap_tolerance = kDefaultSnapTolerance);

// Minimal-length path; among equal-length paths, the lexicographically smallest
// vertex sequence. Absent if dst is unreachable.
std::optional<Path> shortest_path(const RoadGraph& graph, VertexId src, VertexId dst);

// Subgraph induced by the vertices inside region (vertex order preserved).
RoadGraph restrict(const RoadGraph& graph, const Region& region);

// rows x cols lattice with 4-neighbour edges. Vertex r*cols + c sits at
// (c*spacing, r*spacing).
RoadGraph generate_grid(std::size_t rows, std::size_t cols, double spacing);

}  // namespace dtnsat
