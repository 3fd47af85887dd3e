#include "metro/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "metro/error.hpp"
#include "metro/stations.hpp"

namespace metro {

namespace {

using nlohmann::json;

constexpr double kPositionMismatchM = 1.0;
constexpr double kPathMismatchDeg = 1e-7;

json feature_collection(GeoPoint origin) {
  return json{{"type", "FeatureCollection"},
              {"frame_origin", {{"lat", origin.lat}, {"lon", origin.lon}}},
              {"features", json::array()}};
}

json position_of(GeoPoint g) { return json::array({g.lon, g.lat}); }

GeoPoint geo_of(const json& position, const std::string& where) {
  if (!position.is_array() || position.size() < 2 || !position[0].is_number() || !position[1].is_number()) {
    throw MetroError(ErrorKind::Parse, where + ": malformed coordinate");
  }
  return {position[1].get<double>(), position[0].get<double>()};
}

json parse_collection(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MetroError(ErrorKind::Parse, source + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw MetroError(ErrorKind::Parse, source + ": not a GeoJSON FeatureCollection");
  }
  return doc;
}

long long integer_property(const json& props, const char* key, const std::string& where) {
  if (!props.contains(key) || !props[key].is_number_integer()) {
    throw MetroError(ErrorKind::Parse, where + ": missing integer property " + key);
  }
  return props[key].get<long long>();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<PlanarPoint> StationsArtifact::positions() const {
  std::vector<PlanarPoint> out(stations.size());
  std::vector<char> filled(stations.size(), 0);
  for (const StationRecord& r : stations) {
    if (r.station_id < 0 || static_cast<std::size_t>(r.station_id) >= stations.size() || filled[r.station_id]) {
      throw MetroError(ErrorKind::Parse, "station ids must be exactly 0..K-1");
    }
    filled[r.station_id] = 1;
    out[r.station_id] = r.position;
  }
  return out;
}

LineGenome LinesArtifact::genome() const {
  std::vector<const LineRecord*> ordered;
  for (const LineRecord& r : lines) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const LineRecord* a, const LineRecord* b) { return a->line_id < b->line_id; });
  LineGenome g;
  for (const LineRecord* r : ordered) {
    Line line;
    for (long long id : r->station_ids) {
      if (id < 0) throw MetroError(ErrorKind::Parse, "negative station id in line " + std::to_string(r->line_id));
      line.push_back(static_cast<StationIndex>(id));
    }
    g.lines.push_back(std::move(line));
  }
  return g;
}

std::string stations_geojson(std::span<const PlanarPoint> stations, std::span<const double> serviced,
                             GeoPoint origin) {
  json doc = feature_collection(origin);
  for (std::size_t i = 0; i < stations.size(); ++i) {
    doc["features"].push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", position_of(unproject(stations[i], origin))}}},
        {"properties",
         {{"station_id", i},
          {"serviced_population", i < serviced.size() ? serviced[i] : 0.0},
          {"x_m", stations[i].x},
          {"y_m", stations[i].y}}},
    });
  }
  return doc.dump(2) + "\n";
}

std::string lines_geojson(const LineGenome& genome, std::span<const PlanarPoint> stations, GeoPoint origin) {
  json doc = feature_collection(origin);
  for (std::size_t l = 0; l < genome.lines.size(); ++l) {
    json coords = json::array();
    for (StationIndex s : genome.lines[l]) coords.push_back(position_of(unproject(stations[s], origin)));
    doc["features"].push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
        {"properties", {{"line_id", l}, {"station_ids", genome.lines[l]}}},
    });
  }
  return doc.dump(2) + "\n";
}

StationsArtifact parse_stations_geojson(const std::string& text, const std::string& source) {
  const json doc = parse_collection(text, source);
  StationsArtifact out;
  if (doc.contains("frame_origin")) {
    const json& o = doc["frame_origin"];
    if (!o.is_object() || !o.contains("lat") || !o.contains("lon") || !o["lat"].is_number() || !o["lon"].is_number()) {
      throw MetroError(ErrorKind::Parse, source + ": malformed frame_origin");
    }
    out.origin = {o["lat"].get<double>(), o["lon"].get<double>()};
  }
  std::size_t index = 0;
  for (const json& f : doc["features"]) {
    const std::string where = source + ": feature " + std::to_string(index++);
    if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object() ||
        f["geometry"].value("type", "") != "Point" || !f.contains("properties") || !f["properties"].is_object()) {
      throw MetroError(ErrorKind::Parse, where + ": expected a Point feature with properties");
    }
    const json& props = f["properties"];
    StationRecord r;
    r.station_id = integer_property(props, "station_id", where);
    r.location = geo_of(f["geometry"].value("coordinates", json()), where);
    if (!props.contains("serviced_population") || !props["serviced_population"].is_number()) {
      throw MetroError(ErrorKind::Parse, where + ": missing serviced_population");
    }
    r.serviced_population = props["serviced_population"].get<double>();
    if (props.contains("x_m") && props.contains("y_m") && props["x_m"].is_number() && props["y_m"].is_number()) {
      r.position = {props["x_m"].get<double>(), props["y_m"].get<double>()};
    } else {
      r.position = project(r.location, out.origin);
    }
    out.stations.push_back(r);
  }
  return out;
}

LinesArtifact parse_lines_geojson(const std::string& text, const std::string& source) {
  const json doc = parse_collection(text, source);
  LinesArtifact out;
  std::size_t index = 0;
  for (const json& f : doc["features"]) {
    const std::string where = source + ": feature " + std::to_string(index++);
    if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object() ||
        f["geometry"].value("type", "") != "LineString" || !f.contains("properties") || !f["properties"].is_object()) {
      throw MetroError(ErrorKind::Parse, where + ": expected a LineString feature with properties");
    }
    const json& props = f["properties"];
    LineRecord r;
    r.line_id = integer_property(props, "line_id", where);
    if (!props.contains("station_ids") || !props["station_ids"].is_array()) {
      throw MetroError(ErrorKind::Parse, where + ": missing station_ids array");
    }
    for (const json& id : props["station_ids"]) {
      if (!id.is_number_integer()) throw MetroError(ErrorKind::Parse, where + ": non-integer station id");
      r.station_ids.push_back(id.get<long long>());
    }
    const json coords = f["geometry"].value("coordinates", json::array());
    if (!coords.is_array()) throw MetroError(ErrorKind::Parse, where + ": malformed coordinates");
    for (const json& c : coords) r.path.push_back(geo_of(c, where));
    out.lines.push_back(std::move(r));
  }
  return out;
}

StationsArtifact load_stations_geojson(const std::filesystem::path& path) {
  return parse_stations_geojson(read_text_file(path), path.string());
}

LinesArtifact load_lines_geojson(const std::filesystem::path& path) {
  return parse_lines_geojson(read_text_file(path), path.string());
}

std::string grid_csv(const DemandGrid& grid) {
  std::ostringstream out;
  out << "x,y,population\n";
  for (const DemandCell& c : grid.cells) {
    out << format_double(c.centroid.x) << ',' << format_double(c.centroid.y) << ',' << format_double(c.population)
        << '\n';
  }
  return out.str();
}

std::vector<std::string> validate_artifacts(const StationsArtifact& stations, const LinesArtifact& lines,
                                            const Region* region) {
  std::vector<std::string> violations;
  auto report = [&](std::string msg) { violations.push_back(std::move(msg)); };

  const std::size_t k = stations.stations.size();
  std::vector<const StationRecord*> by_id(k, nullptr);
  if (k == 0) report("stations: file contains no stations");
  for (const StationRecord& r : stations.stations) {
    const std::string name = "station " + std::to_string(r.station_id);
    if (r.station_id < 0 || static_cast<std::size_t>(r.station_id) >= k) {
      report(name + ": id outside 0.." + std::to_string(k == 0 ? 0 : k - 1));
      continue;
    }
    if (by_id[r.station_id]) {
      report(name + ": duplicate station_id");
      continue;
    }
    by_id[r.station_id] = &r;
    if (!std::isfinite(r.serviced_population) || r.serviced_population < 0.0) {
      report(name + ": serviced_population must be a non-negative number");
    }
    if (!std::isfinite(r.position.x) || !std::isfinite(r.position.y)) {
      report(name + ": non-finite planar position");
      continue;
    }
    if (distance(project(r.location, stations.origin), r.position) > kPositionMismatchM) {
      report(name + ": coordinates disagree with x_m/y_m");
    }
    if (region && !region->contains_within(r.position, kStationSnapToleranceM)) {
      report(name + ": lies outside every district");
    }
  }

  if (lines.lines.empty()) report("lines: file contains no lines");

  // Union-find over valid station ids; tolerant of malformed lines.
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> covered(k, 0);
  std::set<long long> line_ids;

  for (const LineRecord& line : lines.lines) {
    const std::string name = "line " + std::to_string(line.line_id);
    if (!line_ids.insert(line.line_id).second) report(name + ": duplicate line_id");
    if (line.station_ids.size() < 2) report(name + ": fewer than 2 stations");
    std::set<long long> seen;
    for (long long id : line.station_ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= k) {
        report(name + ": unknown station " + std::to_string(id));
      } else if (!seen.insert(id).second) {
        report(name + ": loop, station " + std::to_string(id) + " appears more than once");
      }
    }
    for (std::size_t p = 0; p < line.station_ids.size(); ++p) {
      const long long id = line.station_ids[p];
      if (id < 0 || static_cast<std::size_t>(id) >= k) continue;
      covered[id] = 1;
      if (p > 0) {
        const long long prev = line.station_ids[p - 1];
        if (prev >= 0 && static_cast<std::size_t>(prev) < k) parent[find(id)] = find(prev);
      }
    }
    if (line.path.size() != line.station_ids.size()) {
      report(name + ": geometry has " + std::to_string(line.path.size()) + " vertices for " +
             std::to_string(line.station_ids.size()) + " stations");
    } else {
      for (std::size_t p = 0; p < line.path.size(); ++p) {
        const long long id = line.station_ids[p];
        if (id < 0 || static_cast<std::size_t>(id) >= k || !by_id[id]) continue;
        const GeoPoint expected = by_id[id]->location;
        if (std::abs(expected.lat - line.path[p].lat) > kPathMismatchDeg ||
            std::abs(expected.lon - line.path[p].lon) > kPathMismatchDeg) {
          report(name + ": vertex " + std::to_string(p) + " does not match station " + std::to_string(id));
        }
      }
    }
  }

  std::vector<std::size_t> stranded;
  for (std::size_t s = 0; s < k; ++s) {
    if (!covered[s]) report("station " + std::to_string(s) + ": served by no line (network disconnected)");
    if (k > 0 && find(s) != find(0)) stranded.push_back(s);
  }
  if (!stranded.empty()) {
    std::string ids;
    for (std::size_t s : stranded) ids += (ids.empty() ? "" : " ") + std::to_string(s);
    report("network disconnected: stations {" + ids + "} unreachable from station 0");
  }
  return violations;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MetroError(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MetroError(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw MetroError(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace metro
