#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metro/demand.hpp"
#include "metro/geo.hpp"
#include "metro/lines.hpp"
#include "metro/region.hpp"

namespace metro {

// On-disk formats written by the CLI. Station and line files are GeoJSON
// FeatureCollections whose coordinates are WGS84 [lon, lat]; stations also
// carry their exact planar position (x_m, y_m) and the collection records the
// projection origin as a `frame_origin` member.

struct StationRecord {
  long long station_id = 0;
  GeoPoint location;
  PlanarPoint position;
  double serviced_population = 0.0;
};

struct StationsArtifact {
  GeoPoint origin;
  std::vector<StationRecord> stations;  // file order

  /// Positions ordered by station_id. Throws Parse unless ids are 0..K-1.
  std::vector<PlanarPoint> positions() const;
};

struct LineRecord {
  long long line_id = 0;
  std::vector<long long> station_ids;
  std::vector<GeoPoint> path;
};

struct LinesArtifact {
  std::vector<LineRecord> lines;  // file order

  /// Lines ordered by line_id. Throws Parse on negative station ids.
  LineGenome genome() const;
};

std::string stations_geojson(std::span<const PlanarPoint> stations, std::span<const double> serviced,
                             GeoPoint origin);
std::string lines_geojson(const LineGenome& genome, std::span<const PlanarPoint> stations, GeoPoint origin);

/// Throws Parse / Io.
StationsArtifact parse_stations_geojson(const std::string& text, const std::string& source = "stations");
LinesArtifact parse_lines_geojson(const std::string& text, const std::string& source = "lines");
StationsArtifact load_stations_geojson(const std::filesystem::path& path);
LinesArtifact load_lines_geojson(const std::filesystem::path& path);

/// `x,y,population` per cell.
std::string grid_csv(const DemandGrid& grid);

/// Human-readable list of every violated invariant; empty when the pair of
/// artifacts is a valid network. With a region, stations must also lie
/// inside (or within the snap tolerance of) a district.
std::vector<std::string> validate_artifacts(const StationsArtifact& stations, const LinesArtifact& lines,
                                            const Region* region = nullptr);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace metro
