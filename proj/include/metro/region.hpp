#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "metro/geo.hpp"

namespace metro {

/// Administrative district with a single population density.
struct District {
  std::string id;
  std::vector<Polygon> polygons;
  double density_per_km2 = 0.0;
  double area_km2 = 0.0;
  BoundingBox bounds;

  double population() const noexcept { return density_per_km2 * area_km2; }
  bool contains(PlanarPoint p) const noexcept;
};

/// Validates rings and computes area and bounds. Throws InvalidPolygon.
District make_district(std::string id, std::vector<Polygon> polygons, double density_per_km2);

/// Study area: districts projected into one planar frame around `origin`.
class Region {
 public:
  Region() = default;
  Region(GeoPoint origin, std::vector<District> districts);

  const GeoPoint& origin() const noexcept { return origin_; }
  const std::vector<District>& districts() const noexcept { return districts_; }
  const BoundingBox& bounds() const noexcept { return bounds_; }

  bool contains(PlanarPoint p) const noexcept;
  /// Inside some district, or within `tolerance_m` of a district boundary.
  bool contains_within(PlanarPoint p, double tolerance_m) const noexcept;
  PlanarPoint nearest_boundary_point(PlanarPoint p) const noexcept;
  double implied_population() const noexcept;

 private:
  GeoPoint origin_;
  std::vector<District> districts_;
  BoundingBox bounds_;
};

/// district_id -> persons per km^2. Header `district_id,density_per_km2`.
std::map<std::string, double> load_densities(const std::filesystem::path& path);

/// GeoJSON FeatureCollection of Polygon/MultiPolygon features carrying a
/// string `district_id` property. Features sharing an id are merged. The
/// projection origin is the centre of the lon/lat bounding box of all
/// boundary vertices.
Region load_region(const std::filesystem::path& boundaries, const std::filesystem::path& densities);

}  // namespace metro
