#include "metro/region.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>

#include "delimited.hpp"
#include "metro/error.hpp"

namespace metro {

namespace {

using nlohmann::json;

// Rings of one polygon, still in lon/lat.
using GeoRing = std::vector<GeoPoint>;
using GeoPolygon = std::vector<GeoRing>;

GeoRing parse_ring(const json& coords, const std::string& where) {
  if (!coords.is_array()) throw MetroError(ErrorKind::Parse, where + ": ring is not an array");
  GeoRing ring;
  ring.reserve(coords.size());
  for (const json& position : coords) {
    if (!position.is_array() || position.size() < 2 || !position[0].is_number() || !position[1].is_number()) {
      throw MetroError(ErrorKind::Parse, where + ": malformed position");
    }
    GeoPoint p{position[1].get<double>(), position[0].get<double>()};
    validate(p);
    ring.push_back(p);
  }
  return ring;
}

GeoPolygon parse_polygon(const json& coords, const std::string& where) {
  if (!coords.is_array() || coords.empty()) throw MetroError(ErrorKind::Parse, where + ": polygon has no rings");
  GeoPolygon polygon;
  for (const json& ring : coords) polygon.push_back(parse_ring(ring, where));
  return polygon;
}

Ring project_ring(const GeoRing& ring, GeoPoint origin) {
  Ring out;
  out.reserve(ring.size());
  for (const GeoPoint& g : ring) out.push_back(project(g, origin));
  return open_ring(std::move(out));
}

void check_ring(const Ring& ring, const std::string& id, bool outer) {
  if (ring.size() < 3) {
    throw MetroError(ErrorKind::InvalidPolygon, "district " + id + ": ring with fewer than 3 vertices");
  }
  if (signed_area(ring) == 0.0) throw MetroError(ErrorKind::InvalidPolygon, "district " + id + ": zero-area ring");
  if (outer && self_intersects(ring)) {
    throw MetroError(ErrorKind::InvalidPolygon, "district " + id + ": self-intersecting outer ring");
  }
}

}  // namespace

bool District::contains(PlanarPoint p) const noexcept {
  if (!bounds.contains(p)) return false;
  return std::any_of(polygons.begin(), polygons.end(), [&](const Polygon& poly) { return metro::contains(poly, p); });
}

District make_district(std::string id, std::vector<Polygon> polygons, double density_per_km2) {
  if (!std::isfinite(density_per_km2) || density_per_km2 < 0.0) {
    throw MetroError(ErrorKind::Parse, "district " + id + ": density must be a non-negative number");
  }
  if (polygons.empty()) throw MetroError(ErrorKind::InvalidPolygon, "district " + id + ": no polygons");
  District d;
  d.id = std::move(id);
  d.density_per_km2 = density_per_km2;
  double area_m2 = 0.0;
  for (Polygon& poly : polygons) {
    poly.outer = open_ring(std::move(poly.outer));
    for (Ring& hole : poly.holes) hole = open_ring(std::move(hole));
    check_ring(poly.outer, d.id, true);
    for (const Ring& hole : poly.holes) check_ring(hole, d.id, false);
    area_m2 += area(poly);
    d.bounds.include(bounds(poly));
  }
  if (!(area_m2 > 0.0)) throw MetroError(ErrorKind::InvalidPolygon, "district " + d.id + ": non-positive area");
  d.area_km2 = area_m2 / 1e6;
  d.polygons = std::move(polygons);
  return d;
}

Region::Region(GeoPoint origin, std::vector<District> districts)
    : origin_(origin), districts_(std::move(districts)) {
  for (const District& d : districts_) bounds_.include(d.bounds);
}

bool Region::contains(PlanarPoint p) const noexcept {
  return std::any_of(districts_.begin(), districts_.end(), [&](const District& d) { return d.contains(p); });
}

bool Region::contains_within(PlanarPoint p, double tolerance_m) const noexcept {
  if (contains(p)) return true;
  return distance(p, nearest_boundary_point(p)) <= tolerance_m;
}

PlanarPoint Region::nearest_boundary_point(PlanarPoint p) const noexcept {
  PlanarPoint best = p;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const District& d : districts_) {
    for (const Polygon& poly : d.polygons) {
      const PlanarPoint q = closest_boundary_point(poly, p);
      const double d2 = squared_distance(p, q);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = q;
      }
    }
  }
  return best;
}

double Region::implied_population() const noexcept {
  double total = 0.0;
  for (const District& d : districts_) total += d.population();
  return total;
}

std::map<std::string, double> load_densities(const std::filesystem::path& path) {
  const detail::DelimitedTable table = detail::read_delimited(path);
  if (table.header.size() < 2 || detail::lowercase(table.header[0]) != "district_id" ||
      detail::lowercase(table.header[1]) != "density_per_km2") {
    throw MetroError(ErrorKind::Parse, path.string() + ": expected header district_id,density_per_km2");
  }
  std::map<std::string, double> densities;
  for (const detail::DelimitedRow& row : table.rows) {
    const std::string where = path.string() + ":" + std::to_string(row.line);
    double value = 0.0;
    if (row.fields.size() < 2 || row.fields[0].empty() || !detail::parse_double(row.fields[1], value)) {
      throw MetroError(ErrorKind::Parse, where + ": malformed density row");
    }
    if (!std::isfinite(value) || value < 0.0) throw MetroError(ErrorKind::Parse, where + ": negative density");
    if (!densities.emplace(row.fields[0], value).second) {
      throw MetroError(ErrorKind::Parse, where + ": duplicate district_id " + row.fields[0]);
    }
  }
  return densities;
}

Region load_region(const std::filesystem::path& boundaries, const std::filesystem::path& densities_path) {
  const auto densities = load_densities(densities_path);

  std::ifstream in(boundaries);
  if (!in) throw MetroError(ErrorKind::Io, "cannot open " + boundaries.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw MetroError(ErrorKind::Parse, boundaries.string() + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw MetroError(ErrorKind::Parse, boundaries.string() + ": not a GeoJSON FeatureCollection");
  }

  // Keep first-seen order of ids so the district list is deterministic.
  std::vector<std::string> order;
  std::map<std::string, std::vector<GeoPolygon>> by_id;
  double min_lat = 90.0, max_lat = -90.0, min_lon = 180.0, max_lon = -180.0;

  std::size_t feature_index = 0;
  for (const json& feature : doc["features"]) {
    const std::string where = boundaries.string() + ": feature " + std::to_string(feature_index++);
    if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw MetroError(ErrorKind::Parse, where + ": missing geometry");
    }
    const json& props = feature.contains("properties") ? feature["properties"] : json();
    if (!props.is_object() || !props.contains("district_id") || !props["district_id"].is_string()) {
      throw MetroError(ErrorKind::Parse, where + ": missing string property district_id");
    }
    const std::string id = props["district_id"].get<std::string>();
    const json& geometry = feature["geometry"];
    const std::string type = geometry.value("type", "");
    if (!geometry.contains("coordinates")) throw MetroError(ErrorKind::Parse, where + ": missing coordinates");

    std::vector<GeoPolygon> polygons;
    if (type == "Polygon") {
      polygons.push_back(parse_polygon(geometry["coordinates"], where));
    } else if (type == "MultiPolygon") {
      if (!geometry["coordinates"].is_array()) throw MetroError(ErrorKind::Parse, where + ": malformed MultiPolygon");
      for (const json& poly : geometry["coordinates"]) polygons.push_back(parse_polygon(poly, where));
    } else {
      throw MetroError(ErrorKind::Parse, where + ": unsupported geometry type '" + type + "'");
    }

    for (const GeoPolygon& poly : polygons) {
      for (const GeoRing& ring : poly) {
        for (const GeoPoint& g : ring) {
          min_lat = std::min(min_lat, g.lat);
          max_lat = std::max(max_lat, g.lat);
          min_lon = std::min(min_lon, g.lon);
          max_lon = std::max(max_lon, g.lon);
        }
      }
    }
    auto [it, inserted] = by_id.try_emplace(id);
    if (inserted) order.push_back(id);
    for (GeoPolygon& poly : polygons) it->second.push_back(std::move(poly));
  }
  if (order.empty()) throw MetroError(ErrorKind::Parse, boundaries.string() + ": no features");

  const GeoPoint origin{0.5 * (min_lat + max_lat), 0.5 * (min_lon + max_lon)};

  std::vector<District> districts;
  for (const std::string& id : order) {
    const auto density = densities.find(id);
    if (density == densities.end()) throw MetroError(ErrorKind::MissingDensity, "no density for district " + id);
    std::vector<Polygon> polygons;
    for (const GeoPolygon& geo : by_id[id]) {
      Polygon poly;
      poly.outer = project_ring(geo.front(), origin);
      for (std::size_t r = 1; r < geo.size(); ++r) poly.holes.push_back(project_ring(geo[r], origin));
      polygons.push_back(std::move(poly));
    }
    districts.push_back(make_district(id, std::move(polygons), density->second));
  }
  return Region(origin, std::move(districts));
}

}  // namespace metro
