#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dtnsat {

// Planar coordinates in meters (x east, y north).
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline double distance(const GeoPoint& a, const GeoPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_squared(const GeoPoint& a, const GeoPoint& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Polyline {
  std::vector<GeoPoint> points;

  double length() const;
};

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

struct Polygon {
  // Closed ring; the closing vertex may or may not repeat the first one.
  std::vector<GeoPoint> ring;
};

// Area a node group may move in. Points on the boundary count as inside.
class Region {
 public:
  explicit Region(BoundingBox box);
  explicit Region(Polygon polygon);

  bool contains(const GeoPoint& p) const;
  bool is_box() const { return std::holds_alternative<BoundingBox>(shape_); }
  const BoundingBox& box() const { return std::get<BoundingBox>(shape_); }
  const Polygon& polygon() const { return std::get<Polygon>(shape_); }

 private:
  std::variant<BoundingBox, Polygon> shape_;
};

}  // namespace dtnsat
