#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "dtnsat/contacts.hpp"
#include "dtnsat/road_graph.hpp"

namespace oracle {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t sets() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) n += find(i) == i;
    return n;
  }
};

inline std::vector<dtnsat::NodePair> pair_scan(std::span<const dtnsat::GeoPoint> p, double range) {
  std::vector<dtnsat::NodePair> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double dx = p[i].x - p[j].x;
      const double dy = p[i].y - p[j].y;
      if (dx * dx + dy * dy <= range * range) {
        out.push_back({static_cast<dtnsat::NodeId>(i), static_cast<dtnsat::NodeId>(j)});
      }
    }
  }
  return out;
}

// Shortest simple-path length by exhaustive DFS.
inline std::optional<double> enumerate_paths(const dtnsat::RoadGraph& g, dtnsat::VertexId src,
                                             dtnsat::VertexId dst) {
  std::optional<double> best;
  std::vector<bool> on_path(g.vertex_count(), false);
  auto dfs = [&](auto&& self, dtnsat::VertexId v, double length) -> void {
    if (v == dst) {
      if (!best || length < *best) best = length;
      return;
    }
    on_path[v] = true;
    for (const auto& e : g.edges()) {
      dtnsat::VertexId w;
      if (e.a == v) {
        w = e.b;
      } else if (e.b == v) {
        w = e.a;
      } else {
        continue;
      }
      if (!on_path[w]) self(self, w, length + e.length);
    }
    on_path[v] = false;
  };
  dfs(dfs, src, 0.0);
  return best;
}

// Pearson chi-square statistic of observed counts against a uniform expectation.
inline double chi_square_uniform(std::span<const std::size_t> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double chi = 0.0;
  for (auto c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi;
}

}  // namespace oracle
