#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metro/geo.hpp"
#include "metro/region.hpp"

namespace metro {

/// Point source of travel demand (mall, campus, airport...).
struct GeneratorPoint {
  std::string name;
  double visitors_per_day = 0.0;
  GeoPoint location;
  PlanarPoint position;
};

/// Reads `name,daily_visitors,latitude,longitude` rows (the long-form header
/// `Centre,Number of daily visitors,Latitude,Longitude` is also accepted, as
/// is tab delimiting) and projects them around `origin`.
std::vector<GeneratorPoint> load_generators(const std::filesystem::path& path, GeoPoint origin);

/// Throws GeneratorOutOfRegion for a generator farther than 10 km outside the
/// region's bounding box.
void check_generators_within(const Region& region, std::span<const GeneratorPoint> generators);

struct DemandCell {
  PlanarPoint centroid;
  double population = 0.0;
};

/// Quadrature nodes for the district coverage integral.
struct DemandGrid {
  double cell_size_m = 0.0;
  std::vector<DemandCell> cells;
  double total_population = 0.0;
};

/// Rasterizes districts onto an axis-aligned grid anchored at `anchor`
/// (default: lower-left corner of the union bounding box). A cell belongs to
/// the first district whose polygons contain its centroid (even-odd rule) and
/// carries density * cell area. Empty cells are omitted; rows are emitted
/// south to north, west to east. Throws EmptyGrid if nothing remains.
DemandGrid rasterize(std::span<const District> districts, double cell_size_m,
                     std::optional<PlanarPoint> anchor = std::nullopt);

}  // namespace metro
