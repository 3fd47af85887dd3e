#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace metro {

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// WGS84 degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Meters east (x) and north (y) of a region's reference origin.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

inline double squared_distance(PlanarPoint a, PlanarPoint b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(PlanarPoint a, PlanarPoint b) noexcept { return std::sqrt(squared_distance(a, b)); }

/// Throws InvalidCoordinate when lat/lon are out of range or not finite.
void validate(GeoPoint p);

/// Throws InvalidCoordinate unless finite and within 10^7 m of the origin.
void validate(PlanarPoint p);

/// Local equirectangular projection around `origin`.
PlanarPoint project(GeoPoint p, GeoPoint origin) noexcept;
GeoPoint unproject(PlanarPoint p, GeoPoint origin) noexcept;

struct BoundingBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  bool empty() const noexcept { return min_x > max_x || min_y > max_y; }
  void include(PlanarPoint p) noexcept;
  void include(const BoundingBox& other) noexcept;
  BoundingBox expanded(double margin) const noexcept;
  bool contains(PlanarPoint p) const noexcept;
  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }
};

/// Open ring: the closing vertex is not repeated.
using Ring = std::vector<PlanarPoint>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

/// Shoelace signed area in m^2 (counter-clockwise positive).
double signed_area(const Ring& ring) noexcept;

/// |outer| minus |holes|, m^2.
double area(const Polygon& polygon) noexcept;

/// True if two non-adjacent edges of the ring touch or cross.
bool self_intersects(const Ring& ring);

/// Even-odd crossing test over the outer ring and all holes.
bool contains(const Polygon& polygon, PlanarPoint p) noexcept;

/// Closest point to `p` on any edge of any ring.
PlanarPoint closest_boundary_point(const Polygon& polygon, PlanarPoint p) noexcept;

BoundingBox bounds(const Polygon& polygon) noexcept;

/// Drops a repeated closing vertex, if present.
Ring open_ring(Ring ring);

}  // namespace metro
