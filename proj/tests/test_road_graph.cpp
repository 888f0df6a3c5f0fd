#include <doctest.h>

#include <random>
#include <set>

#include "dtnsat/road_graph.hpp"
#include "dtnsat/wkt.hpp"
#include "oracles.hpp"

using namespace dtnsat;

namespace {

Polyline line(std::initializer_list<GeoPoint> pts) { return Polyline{std::vector<GeoPoint>(pts)}; }

RoadGraph random_graph(std::mt19937_64& gen, std::size_t vertices, double edge_prob) {
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<GeoPoint> pts;
  for (std::size_t i = 0; i < vertices; ++i) pts.push_back({coord(gen), coord(gen)});
  std::vector<Edge> edges;
  for (VertexId a = 0; a < vertices; ++a) {
    for (VertexId b = a + 1; b < vertices; ++b) {
      if (coin(gen) < edge_prob) edges.push_back({a, b, distance(pts[a], pts[b])});
    }
  }
  return RoadGraph(pts, edges);
}

std::set<std::pair<GeoPoint, GeoPoint>, bool (*)(const std::pair<GeoPoint, GeoPoint>&,
                                                 const std::pair<GeoPoint, GeoPoint>&)>
edge_set(const RoadGraph& g) {
  auto less = [](const std::pair<GeoPoint, GeoPoint>& l, const std::pair<GeoPoint, GeoPoint>& r) {
    return std::tie(l.first.x, l.first.y, l.second.x, l.second.y) <
           std::tie(r.first.x, r.first.y, r.second.x, r.second.y);
  };
  std::set<std::pair<GeoPoint, GeoPoint>, bool (*)(const std::pair<GeoPoint, GeoPoint>&,
                                                   const std::pair<GeoPoint, GeoPoint>&)>
      out(less);
  for (const auto& e : g.edges()) {
    GeoPoint a = g.vertex(e.a);
    GeoPoint b = g.vertex(e.b);
    if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) std::swap(a, b);
    out.insert({a, b});
  }
  return out;
}

}  // namespace

TEST_CASE("build_graph merges shared and nearby endpoints") {
  SUBCASE("shared endpoint") {
    const std::vector<Polyline> in{line({{0, 0}, {1, 0}}), line({{1, 0}, {2, 0}})};
    const auto g = build_graph(in);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.component_count() == 1);
  }
  SUBCASE("endpoints within tolerance") {
    const std::vector<Polyline> in{line({{0, 0}, {1, 0}}), line({{1, 0.05}, {1, 3}})};
    const auto g = build_graph(in, 0.1);
    CHECK(g.vertex_count() == 3);
    CHECK(g.component_count() == 1);
  }
  SUBCASE("endpoints beyond tolerance stay apart") {
    const std::vector<Polyline> in{line({{0, 0}, {1, 0}}), line({{1, 0.5}, {1, 3}})};
    const auto g = build_graph(in, 0.1);
    CHECK(g.vertex_count() == 4);
    CHECK(g.component_count() == 2);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_WITH_AS(build_graph({}), "no usable map geometry", MapError);
  }
  SUBCASE("edge length is the distance between snapped vertices") {
    const std::vector<Polyline> in{line({{0, 0}, {3, 4}, {3, 4.05}, {10, 4}})};
    const auto g = build_graph(in, 0.1);
    for (const auto& e : g.edges()) {
      CHECK(std::abs(e.length - distance(g.vertex(e.a), g.vertex(e.b))) <= 1e-9);
      CHECK(e.a != e.b);
    }
  }
}

TEST_CASE("component count matches union-find over snapped endpoints") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> coord(0.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Polyline> in;
    for (int i = 0; i < 10; ++i) {
      // Integer-ish coordinates so that some endpoints coincide.
      in.push_back(line({{std::round(coord(gen)), std::round(coord(gen))},
                         {std::round(coord(gen)), std::round(coord(gen))}}));
    }
    std::vector<Polyline> usable;
    for (const auto& p : in) {
      if (!(p.points[0] == p.points[1])) usable.push_back(p);
    }
    if (usable.empty()) continue;
    const auto g = build_graph(usable, 0.0);

    // Oracle: distinct endpoints, joined by each segment.
    std::vector<GeoPoint> ids;
    auto id_of = [&](const GeoPoint& p) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == p) return i;
      }
      ids.push_back(p);
      return ids.size() - 1;
    };
    std::vector<std::pair<std::size_t, std::size_t>> joins;
    for (const auto& p : usable) joins.emplace_back(id_of(p.points[0]), id_of(p.points[1]));
    oracle::UnionFind uf(ids.size());
    for (auto [a, b] : joins) uf.unite(a, b);
    CHECK(g.component_count() == uf.sets());
    CHECK(g.vertex_count() == ids.size());
  }
}

TEST_CASE("total edge length equals input segment length without snapping") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  std::vector<Polyline> in;
  double expected = 0.0;
  for (int i = 0; i < 30; ++i) {
    Polyline p;
    for (int k = 0; k < 4; ++k) p.points.push_back({coord(gen), coord(gen)});
    expected += p.length();
    in.push_back(p);
  }
  const auto g = build_graph(in, 0.0);
  CHECK(g.total_edge_length() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("shortest_path") {
  SUBCASE("source equals destination") {
    const auto g = generate_grid(3, 3, 5);
    const auto p = shortest_path(g, 4, 4);
    REQUIRE(p);
    CHECK(p->vertices == std::vector<VertexId>{4});
    CHECK(p->length == 0.0);
  }
  SUBCASE("unit square tie goes to the smaller corner index") {
    // 0:(0,0) 1:(1,0) 2:(1,1) 3:(0,1)
    const RoadGraph g({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                      {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
    const auto p = shortest_path(g, 0, 2);
    REQUIRE(p);
    CHECK(p->length == doctest::Approx(2.0));
    CHECK(p->vertices == std::vector<VertexId>{0, 1, 2});
    const auto back = shortest_path(g, 2, 0);
    REQUIRE(back);
    CHECK(back->vertices == std::vector<VertexId>{2, 1, 0});
  }
  SUBCASE("grid corner to corner is the Manhattan distance") {
    const auto g = generate_grid(3, 3, 5);
    const auto p = shortest_path(g, 0, 8);
    REQUIRE(p);
    CHECK(p->length == doctest::Approx(20.0));
    CHECK(p->vertices == std::vector<VertexId>{0, 1, 2, 5, 8});
  }
  SUBCASE("unreachable") {
    const RoadGraph g({{0, 0}, {1, 0}, {5, 5}, {6, 5}}, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_FALSE(shortest_path(g, 0, 3));
  }
}

TEST_CASE("shortest_path agrees with exhaustive enumeration on random small graphs") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(gen, 4 + trial % 9, 0.3);
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
      for (VertexId t = 0; t < g.vertex_count(); ++t) {
        const auto fast = shortest_path(g, s, t);
        const auto slow = oracle::enumerate_paths(g, s, t);
        REQUIRE(fast.has_value() == slow.has_value());
        if (!fast) continue;
        CHECK(fast->length == doctest::Approx(*slow).epsilon(1e-12));
        // Returned path is walkable and its length adds up.
        double sum = 0.0;
        for (std::size_t k = 1; k < fast->vertices.size(); ++k) {
          sum += distance(g.vertex(fast->vertices[k - 1]), g.vertex(fast->vertices[k]));
        }
        CHECK(sum == doctest::Approx(fast->length).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("generate_grid") {
  const auto g2 = generate_grid(2, 2, 10);
  CHECK(g2.vertex_count() == 4);
  CHECK(g2.edge_count() == 4);
  const auto g3 = generate_grid(3, 3, 5);
  CHECK(g3.vertex_count() == 9);
  CHECK(g3.edge_count() == 2 * 3 * 3 - 3 - 3);
  CHECK(g3.component_count() == 1);
  for (const auto& e : g3.edges()) CHECK(e.length == 5.0);
  CHECK_THROWS(generate_grid(1, 3, 5));
  CHECK_THROWS(generate_grid(3, 3, 0));
}

TEST_CASE("restrict") {
  const auto g = generate_grid(4, 4, 10);
  SUBCASE("covering region keeps the graph") {
    const auto r = restrict(g, Region(BoundingBox{-1, -1, 100, 100}));
    CHECK(r.vertex_count() == g.vertex_count());
    CHECK(r.edge_count() == g.edge_count());
  }
  SUBCASE("empty region is an error") {
    CHECK_THROWS_WITH_AS(restrict(g, Region(BoundingBox{500, 500, 600, 600})),
                         "region contains no map vertices", MapError);
  }
  SUBCASE("half the grid matches per-vertex containment") {
    const Region box(BoundingBox{0, 0, 15, 30});
    std::size_t inside = 0;
    for (const auto& v : g.vertices()) inside += box.contains(v);
    std::size_t inside_edges = 0;
    for (const auto& e : g.edges()) inside_edges += box.contains(g.vertex(e.a)) && box.contains(g.vertex(e.b));
    const auto r = restrict(g, box);
    CHECK(r.vertex_count() == inside);
    CHECK(inside == 8);
    CHECK(r.edge_count() == inside_edges);
    for (const auto& v : r.vertices()) CHECK(box.contains(v));
    const auto twice = restrict(r, box);
    CHECK(twice.vertex_count() == r.vertex_count());
    CHECK(twice.edge_count() == r.edge_count());
  }
}

TEST_CASE("bundled WKT grid is the generated grid") {
  const auto parsed = parse_wkt(read_text_file(std::string(DTNSAT_SOURCE_DIR) + "/maps/grid.wkt"));
  const auto from_file = build_graph(parsed.polylines);
  const auto generated = generate_grid(11, 11, 60);
  REQUIRE(from_file.vertex_count() == generated.vertex_count());
  for (VertexId v = 0; v < generated.vertex_count(); ++v) CHECK(from_file.vertex(v) == generated.vertex(v));
  CHECK(edge_set(from_file) == edge_set(generated));
}
