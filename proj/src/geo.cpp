#include "metro/geo.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <sstream>

#include "metro/error.hpp"

namespace metro {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(PlanarPoint o, PlanarPoint a, PlanarPoint b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(PlanarPoint o, PlanarPoint a, PlanarPoint b) noexcept {
  const double c = cross(o, a, b);
  return (c > 0.0) - (c < 0.0);
}

bool on_segment(PlanarPoint a, PlanarPoint b, PlanarPoint p) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(PlanarPoint a, PlanarPoint b, PlanarPoint c, PlanarPoint d) noexcept {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

PlanarPoint closest_on_segment(PlanarPoint a, PlanarPoint b, PlanarPoint p) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return a;
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return {a.x + t * dx, a.y + t * dy};
}

bool ring_crossing_parity(const Ring& ring, PlanarPoint p) noexcept {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const PlanarPoint& a = ring[i];
    const PlanarPoint& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

void validate(GeoPoint p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 ||
      p.lon > 180.0) {
    std::ostringstream msg;
    msg << "latitude/longitude out of range: (" << p.lat << ", " << p.lon << ")";
    throw MetroError(ErrorKind::InvalidCoordinate, msg.str());
  }
}

void validate(PlanarPoint p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || std::abs(p.x) >= 1e7 || std::abs(p.y) >= 1e7) {
    std::ostringstream msg;
    msg << "planar coordinate outside the regional frame: (" << p.x << ", " << p.y << ")";
    throw MetroError(ErrorKind::InvalidCoordinate, msg.str());
  }
}

PlanarPoint project(GeoPoint p, GeoPoint origin) noexcept {
  const double y = kEarthRadiusM * (p.lat - origin.lat) * kDegToRad;
  const double x = kEarthRadiusM * (p.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * kDegToRad;
  return {x, y};
}

GeoPoint unproject(PlanarPoint p, GeoPoint origin) noexcept {
  const double lat = origin.lat + p.y / (kEarthRadiusM * kDegToRad);
  const double lon = origin.lon + p.x / (kEarthRadiusM * std::cos(origin.lat * kDegToRad) * kDegToRad);
  return {lat, lon};
}

void BoundingBox::include(PlanarPoint p) noexcept {
  min_x = std::min(min_x, p.x);
  min_y = std::min(min_y, p.y);
  max_x = std::max(max_x, p.x);
  max_y = std::max(max_y, p.y);
}

void BoundingBox::include(const BoundingBox& other) noexcept {
  if (other.empty()) return;
  include(PlanarPoint{other.min_x, other.min_y});
  include(PlanarPoint{other.max_x, other.max_y});
}

BoundingBox BoundingBox::expanded(double margin) const noexcept {
  return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
}

bool BoundingBox::contains(PlanarPoint p) const noexcept {
  return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
}

double signed_area(const Ring& ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex; keeps the cross products small for rings far
  // from the frame origin.
  const PlanarPoint o = ring.front();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& a = ring[i];
    const PlanarPoint& b = ring[(i + 1) % n];
    twice += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
  }
  return 0.5 * twice;
}

double area(const Polygon& polygon) noexcept {
  double a = std::abs(signed_area(polygon.outer));
  for (const Ring& hole : polygon.holes) a -= std::abs(signed_area(hole));
  return a;
}

bool self_intersects(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 4) return false;

  struct Edge {
    std::size_t index;
    double min_x;
    double max_x;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& a = ring[i];
    const PlanarPoint& b = ring[(i + 1) % n];
    edges[i] = {i, std::min(a.x, b.x), std::max(a.x, b.x)};
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) { return l.min_x < r.min_x; });

  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n && edges[v].min_x <= edges[u].max_x; ++v) {
      const std::size_t i = edges[u].index;
      const std::size_t j = edges[v].index;
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap == 1 || gap == n - 1) continue;  // adjacent edges share a vertex
      if (segments_touch(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return true;
    }
  }
  return false;
}

bool contains(const Polygon& polygon, PlanarPoint p) noexcept {
  bool inside = ring_crossing_parity(polygon.outer, p);
  for (const Ring& hole : polygon.holes) {
    if (ring_crossing_parity(hole, p)) inside = !inside;
  }
  return inside;
}

PlanarPoint closest_boundary_point(const Polygon& polygon, PlanarPoint p) noexcept {
  PlanarPoint best = polygon.outer.empty() ? p : polygon.outer.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  auto scan = [&](const Ring& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const PlanarPoint q = closest_on_segment(ring[i], ring[(i + 1) % n], p);
      const double d2 = squared_distance(p, q);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = q;
      }
    }
  };
  scan(polygon.outer);
  for (const Ring& hole : polygon.holes) scan(hole);
  return best;
}

BoundingBox bounds(const Polygon& polygon) noexcept {
  BoundingBox box;
  for (const PlanarPoint& p : polygon.outer) box.include(p);
  return box;
}

Ring open_ring(Ring ring) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

}  // namespace metro
