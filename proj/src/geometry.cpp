#include "dtnsat/geometry.hpp"

#include <algorithm>

namespace dtnsat {

namespace {

double cross(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  if (cross(a, b, p) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

int orientation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
  const double v = cross(a, b, c);
  return (v > 0.0) - (v < 0.0);
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2, const GeoPoint& q1,
                        const GeoPoint& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(q1, p1, p2)) || (o2 == 0 && on_segment(q2, p1, p2)) ||
         (o3 == 0 && on_segment(p1, q1, q2)) || (o4 == 0 && on_segment(p2, q1, q2));
}

std::vector<GeoPoint> open_ring(std::vector<GeoPoint> ring) {
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  return ring;
}

}  // namespace

double Polyline::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

Region::Region(BoundingBox box) : shape_(box) {
  if (!std::isfinite(box.min_x) || !std::isfinite(box.min_y) || !std::isfinite(box.max_x) ||
      !std::isfinite(box.max_y)) {
    throw MapError("region bounding box has non-finite coordinates");
  }
  if (box.min_x > box.max_x || box.min_y > box.max_y) {
    throw MapError("region bounding box has min > max");
  }
}

Region::Region(Polygon polygon) : shape_(Polygon{open_ring(std::move(polygon.ring))}) {
  const auto& ring = std::get<Polygon>(shape_).ring;
  if (ring.size() < 3) throw MapError("region polygon needs at least 3 distinct vertices");
  for (const auto& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw MapError("region polygon has non-finite coordinates");
    }
  }
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) {
        throw MapError("region polygon is self-intersecting");
      }
    }
  }
}

bool Region::contains(const GeoPoint& p) const {
  if (const auto* b = std::get_if<BoundingBox>(&shape_)) {
    return p.x >= b->min_x && p.x <= b->max_x && p.y >= b->min_y && p.y <= b->max_y;
  }
  const auto& ring = std::get<Polygon>(shape_).ring;
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace dtnsat
