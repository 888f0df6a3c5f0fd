#include <doctest.h>

#include <random>

#include "dtnsat/geometry.hpp"
#include "dtnsat/wkt.hpp"

using namespace dtnsat;

TEST_CASE("parse_wkt reads line geometries") {
  SUBCASE("single linestring") {
    const auto r = parse_wkt("LINESTRING (0 0, 1 0)");
    REQUIRE(r.polylines.size() == 1);
    CHECK(r.polylines[0].length() == doctest::Approx(1.0));
  }
  SUBCASE("multilinestring yields one polyline per member") {
    const auto r = parse_wkt("MULTILINESTRING ((0 0, 0 1), (2 2, 3 2, 3 3))");
    REQUIRE(r.polylines.size() == 2);
    CHECK(r.polylines[0].length() == doctest::Approx(1.0));
    CHECK(r.polylines[1].length() == doctest::Approx(2.0));
  }
  SUBCASE("single point is rejected with a warning count") {
    const auto r = parse_wkt("LINESTRING (0 0)");
    CHECK(r.polylines.empty());
    CHECK(r.rejected_polylines == 1);
  }
  SUBCASE("repeated points collapse before the length check") {
    const auto r = parse_wkt("LINESTRING (5 5, 5 5, 5 5)");
    CHECK(r.polylines.empty());
    CHECK(r.rejected_polylines == 1);
  }
  SUBCASE("other geometry kinds are skipped and counted") {
    const auto r = parse_wkt("POINT (1 2)\nPOLYGON ((0 0, 1 0, 1 1, 0 0))\nLINESTRING (0 0, 0 2)\n");
    CHECK(r.skipped_geometries == 2);
    REQUIRE(r.polylines.size() == 1);
    CHECK(r.polylines[0].length() == doctest::Approx(2.0));
  }
  SUBCASE("comments, blank lines, Z ordinates and case") {
    const auto r = parse_wkt("# roads\n\nlinestring z (0 0 7, 3 4 9)\n");
    REQUIRE(r.polylines.size() == 1);
    CHECK(r.polylines[0].length() == doctest::Approx(5.0));
  }
}

TEST_CASE("parse_wkt reports the line of malformed input") {
  const char* bad[] = {"LINESTRING (0 0, 1)", "LINESTRING 0 0, 1 1", "LINESTRING (0 0, 1 1",
                       "LINESTRING (0 0, a 1)", "CURVE (0 0, 1 1)"};
  for (const char* text : bad) {
    CAPTURE(text);
    const std::string doc = std::string("LINESTRING (0 0, 1 1)\n# ok\n") + text + "\n";
    try {
      (void)parse_wkt(doc);
      FAIL("expected a parse error");
    } catch (const WktParseError& e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("serialize then parse reproduces coordinates exactly") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coord(-1e4, 1e4);
  std::vector<Polyline> lines;
  for (int i = 0; i < 50; ++i) {
    Polyline p;
    const int n = 2 + i % 5;
    for (int k = 0; k < n; ++k) p.points.push_back({coord(gen), coord(gen)});
    lines.push_back(p);
  }
  const auto back = parse_wkt(serialize_wkt(lines));
  REQUIRE(back.polylines.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) CHECK(back.polylines[i].points == lines[i].points);
}

TEST_CASE("regions") {
  SUBCASE("box boundary counts as inside") {
    const Region r = parse_region("BBOX 0 0 10 5");
    CHECK(r.contains({0, 0}));
    CHECK(r.contains({10, 5}));
    CHECK(r.contains({5, 2.5}));
    CHECK_FALSE(r.contains({10.0001, 5}));
  }
  SUBCASE("polygon containment including edges") {
    const Region r = parse_region("POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0))");
    CHECK(r.contains({2, 2}));
    CHECK(r.contains({4, 2}));
    CHECK(r.contains({0, 0}));
    CHECK_FALSE(r.contains({5, 2}));
  }
  SUBCASE("concave polygon") {
    const Region r = parse_region("POLYGON ((0 0, 6 0, 6 6, 3 2, 0 6, 0 0))");
    CHECK(r.contains({1, 1}));
    CHECK_FALSE(r.contains({3, 5}));
  }
  SUBCASE("invalid regions") {
    CHECK_THROWS_AS(parse_region("BBOX 5 0 1 1"), MapError);
    CHECK_THROWS_AS(parse_region("POLYGON ((0 0, 1 1, 0 0))"), MapError);
    CHECK_THROWS_AS(parse_region("POLYGON ((0 0, 2 2, 2 0, 0 2, 0 0))"), MapError);  // bow tie
  }
}
