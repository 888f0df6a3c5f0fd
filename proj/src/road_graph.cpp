#include "dtnsat/road_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_map>

namespace dtnsat {

RoadGraph::RoadGraph(std::vector<GeoPoint> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const std::size_t n = vertices_.size();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    if (e.a >= n || e.b >= n) throw MapError("edge references a missing vertex");
    if (e.a == e.b) throw MapError("self-loop edge");
    ++degree[e.a];
    ++degree[e.b];
  }
  adjacency_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) adjacency_offsets_[v + 1] = adjacency_offsets_[v] + degree[v];
  adjacency_.resize(adjacency_offsets_[n]);
  std::vector<std::size_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.a]++] = {e.b, e.length};
    adjacency_[fill[e.b]++] = {e.a, e.length};
  }

  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  component_.assign(n, kUnset);
  std::vector<VertexId> stack;
  for (VertexId start = 0; start < n; ++start) {
    if (component_[start] != kUnset) continue;
    const auto label = static_cast<std::uint32_t>(component_members_.size());
    auto& members = component_members_.emplace_back();
    component_[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (const auto& nb : neighbors(v)) {
        if (component_[nb.vertex] == kUnset) {
          component_[nb.vertex] = label;
          stack.push_back(nb.vertex);
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
}

std::span<const RoadGraph::Neighbor> RoadGraph::neighbors(VertexId v) const {
  return {adjacency_.data() + adjacency_offsets_[v],
          adjacency_offsets_[v + 1] - adjacency_offsets_[v]};
}

double RoadGraph::total_edge_length() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

namespace {

class VertexIndex {
 public:
  explicit VertexIndex(double tolerance) : tolerance_(tolerance) {}

  VertexId find_or_add(const GeoPoint& raw, std::vector<GeoPoint>& vertices) {
    const GeoPoint p{raw.x == 0.0 ? 0.0 : raw.x, raw.y == 0.0 ? 0.0 : raw.y};
    if (tolerance_ == 0.0) {
      const auto key = std::pair{std::bit_cast<std::uint64_t>(p.x), std::bit_cast<std::uint64_t>(p.y)};
      auto [it, inserted] = exact_.try_emplace(key, static_cast<VertexId>(vertices.size()));
      if (inserted) vertices.push_back(p);
      return it->second;
    }
    const auto [cx, cy] = cell_of(p);
    std::optional<VertexId> best;
    double best_d2 = tolerance_ * tolerance_;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(CellKey{cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (VertexId v : it->second) {
          const double d2 = distance_squared(vertices[v], p);
          if (d2 < best_d2 || (d2 == best_d2 && (!best || v < *best))) {
            best = v;
            best_d2 = d2;
          }
        }
      }
    }
    if (best) return *best;
    const auto id = static_cast<VertexId>(vertices.size());
    vertices.push_back(p);
    cells_[CellKey{cx, cy}].push_back(id);
    return id;
  }

 private:
  using CellKey = std::pair<std::int64_t, std::int64_t>;
  struct PairHash {
    template <typename A, typename B>
    std::size_t operator()(const std::pair<A, B>& k) const noexcept {
      const auto h1 = static_cast<std::uint64_t>(k.first) * 0x9E3779B97F4A7C15ULL;
      const auto h2 = static_cast<std::uint64_t>(k.second) + 0x632BE59BD9B4E019ULL;
      return static_cast<std::size_t>(h1 ^ (h2 + (h1 << 6) + (h1 >> 2)));
    }
  };

  CellKey cell_of(const GeoPoint& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / tolerance_)),
            static_cast<std::int64_t>(std::floor(p.y / tolerance_))};
  }

  double tolerance_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, VertexId, PairHash> exact_;
  std::unordered_map<CellKey, std::vector<VertexId>, PairHash> cells_;
};

}  // namespace

RoadGraph build_graph(std::span<const Polyline> polylines, double snap_tolerance) {
  if (!(snap_tolerance >= 0.0) || !std::isfinite(snap_tolerance)) {
    throw MapError("snap tolerance must be a finite value >= 0");
  }
  std::vector<GeoPoint> vertices;
  std::vector<Edge> edges;
  VertexIndex index(snap_tolerance);
  for (const auto& pl : polylines) {
    std::optional<VertexId> prev;
    for (const auto& p : pl.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MapError("non-finite map coordinate");
      const VertexId v = index.find_or_add(p, vertices);
      if (prev && *prev != v) {
        edges.push_back({*prev, v, distance(vertices[*prev], vertices[v])});
      }
      prev = v;
    }
  }
  if (edges.empty()) throw MapError("no usable map geometry");
  return RoadGraph(std::move(vertices), std::move(edges));
}

std::optional<Path> shortest_path(const RoadGraph& graph, VertexId src, VertexId dst) {
  const std::size_t n = graph.vertex_count();
  if (src >= n || dst >= n) throw MapError("shortest_path: vertex out of range");
  if (src == dst) return Path{{src}, 0.0};
  if (graph.component_of(src) != graph.component_of(dst)) return std::nullopt;

  // Distances to dst; settle until src is final.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> to_dst(n, kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  to_dst[dst] = 0.0;
  heap.emplace(0.0, dst);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > to_dst[v]) continue;
    if (v == src) break;
    for (const auto& nb : graph.neighbors(v)) {
      const double nd = d + nb.length;
      if (nd < to_dst[nb.vertex]) {
        to_dst[nb.vertex] = nd;
        heap.emplace(nd, nb.vertex);
      }
    }
  }

  // Walk forward, always taking the smallest-index neighbour that stays on
  // some shortest path; this yields the lexicographically smallest sequence.
  const double total = to_dst[src];
  const double eps = 1e-9 * (1.0 + total);
  Path path{{src}, 0.0};
  VertexId at = src;
  while (at != dst) {
    std::optional<VertexId> next;
    double next_len = 0.0;
    for (const auto& nb : graph.neighbors(at)) {
      if (std::abs(path.length + nb.length + to_dst[nb.vertex] - total) > eps) continue;
      if (!next || nb.vertex < *next) {
        next = nb.vertex;
        next_len = nb.length;
      }
    }
    if (!next) throw MapError("shortest_path: inconsistent distance labels");
    path.vertices.push_back(*next);
    path.length += next_len;
    at = *next;
  }
  return path;
}

RoadGraph restrict(const RoadGraph& graph, const Region& region) {
  constexpr auto kOutside = std::numeric_limits<VertexId>::max();
  std::vector<VertexId> remap(graph.vertex_count(), kOutside);
  std::vector<GeoPoint> vertices;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (region.contains(graph.vertex(v))) {
      remap[v] = static_cast<VertexId>(vertices.size());
      vertices.push_back(graph.vertex(v));
    }
  }
  if (vertices.empty()) throw MapError("region contains no map vertices");
  std::vector<Edge> edges;
  for (const auto& e : graph.edges()) {
    if (remap[e.a] != kOutside && remap[e.b] != kOutside) {
      edges.push_back({remap[e.a], remap[e.b], e.length});
    }
  }
  return RoadGraph(std::move(vertices), std::move(edges));
}

RoadGraph generate_grid(std::size_t rows, std::size_t cols, double spacing) {
  if (rows < 2 || cols < 2) throw MapError("grid needs at least 2 rows and 2 columns");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw MapError("grid spacing must be > 0");
  std::vector<GeoPoint> vertices;
  vertices.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      vertices.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
    }
  }
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), spacing});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), spacing});
    }
  }
  return RoadGraph(std::move(vertices), std::move(edges));
}

}  // namespace dtnsat
