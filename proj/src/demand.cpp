#include "metro/demand.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "delimited.hpp"
#include "metro/error.hpp"

namespace metro {

namespace {

constexpr double kGeneratorMarginM = 10'000.0;
constexpr double kMaxGridCells = 5e7;

enum class Column { Name, Visitors, Latitude, Longitude };

std::optional<Column> classify(const std::string& header) {
  const std::string h = detail::lowercase(header);
  if (h == "name" || h == "centre" || h == "center") return Column::Name;
  if (h == "daily_visitors" || h == "number of daily visitors") return Column::Visitors;
  if (h == "latitude" || h == "lat") return Column::Latitude;
  if (h == "longitude" || h == "lon") return Column::Longitude;
  return std::nullopt;
}

// x positions where the horizontal line at `y` crosses the polygon's rings,
// using the same half-open rule as contains().
void collect_crossings(const Ring& ring, double y, std::vector<double>& xs) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const PlanarPoint& a = ring[i];
    const PlanarPoint& b = ring[j];
    if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
}

}  // namespace

std::vector<GeneratorPoint> load_generators(const std::filesystem::path& path, GeoPoint origin) {
  const detail::DelimitedTable table = detail::read_delimited(path);

  std::optional<std::size_t> idx[4];
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (const auto col = classify(table.header[c])) idx[static_cast<int>(*col)] = c;
  }
  for (const auto& i : idx) {
    if (!i) throw MetroError(ErrorKind::Parse, path.string() + ": expected header name,daily_visitors,latitude,longitude");
  }
  const std::size_t width = 1 + std::max({*idx[0], *idx[1], *idx[2], *idx[3]});

  std::vector<GeneratorPoint> generators;
  generators.reserve(table.rows.size());
  for (const detail::DelimitedRow& row : table.rows) {
    const std::string where = path.string() + ": row " + std::to_string(row.line);
    if (row.fields.size() < width) throw MetroError(ErrorKind::Parse, where + ": too few fields");
    GeneratorPoint g;
    g.name = row.fields[*idx[0]];
    if (!detail::parse_double(row.fields[*idx[1]], g.visitors_per_day) ||
        !detail::parse_double(row.fields[*idx[2]], g.location.lat) ||
        !detail::parse_double(row.fields[*idx[3]], g.location.lon)) {
      throw MetroError(ErrorKind::Parse, where + ": non-numeric field");
    }
    if (!std::isfinite(g.visitors_per_day)) throw MetroError(ErrorKind::Parse, where + ": non-finite visitors");
    if (g.visitors_per_day < 0.0) {
      throw MetroError(ErrorKind::NegativeVisitors, where + ": daily visitors must be >= 0 (" + g.name + ")");
    }
    try {
      validate(g.location);
    } catch (const MetroError& e) {
      throw MetroError(ErrorKind::Parse, where + ": " + e.what());
    }
    g.position = project(g.location, origin);
    generators.push_back(std::move(g));
  }
  return generators;
}

void check_generators_within(const Region& region, std::span<const GeneratorPoint> generators) {
  const BoundingBox allowed = region.bounds().expanded(kGeneratorMarginM);
  for (const GeneratorPoint& g : generators) {
    if (!allowed.contains(g.position)) {
      std::ostringstream msg;
      msg << "generator '" << g.name << "' at (" << g.location.lat << ", " << g.location.lon
          << ") lies more than 10 km outside the region";
      throw MetroError(ErrorKind::GeneratorOutOfRegion, msg.str());
    }
  }
}

DemandGrid rasterize(std::span<const District> districts, double cell_size_m, std::optional<PlanarPoint> anchor) {
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
    throw MetroError(ErrorKind::InvalidConfig, "cell size must be positive");
  }
  BoundingBox box;
  for (const District& d : districts) box.include(d.bounds);
  if (box.empty()) throw MetroError(ErrorKind::EmptyGrid, "no districts to rasterize");

  const PlanarPoint origin = anchor.value_or(PlanarPoint{box.min_x, box.min_y});
  // Columns/rows whose centroids can reach the bounding box.
  const auto first_col = static_cast<long long>(std::floor((box.min_x - origin.x) / cell_size_m));
  const auto last_col = static_cast<long long>(std::ceil((box.max_x - origin.x) / cell_size_m));
  const auto first_row = static_cast<long long>(std::floor((box.min_y - origin.y) / cell_size_m));
  const auto last_row = static_cast<long long>(std::ceil((box.max_y - origin.y) / cell_size_m));
  const double ncells = static_cast<double>(last_col - first_col) * static_cast<double>(last_row - first_row);
  if (ncells > kMaxGridCells) {
    throw MetroError(ErrorKind::InvalidConfig, "cell size too small: grid would exceed 5e7 cells");
  }
  const auto ncols = static_cast<std::size_t>(last_col - first_col);

  const double cell_area_km2 = cell_size_m * cell_size_m / 1e6;
  DemandGrid grid;
  grid.cell_size_m = cell_size_m;

  std::vector<double> xs;
  std::vector<signed char> owner(ncols);
  std::vector<double> row_population(ncols);
  for (long long row = first_row; row < last_row; ++row) {
    const double y = origin.y + (static_cast<double>(row) + 0.5) * cell_size_m;
    std::fill(owner.begin(), owner.end(), 0);
    for (const District& d : districts) {
      if (y < d.bounds.min_y || y > d.bounds.max_y) continue;
      for (const Polygon& poly : d.polygons) {
        xs.clear();
        collect_crossings(poly.outer, y, xs);
        for (const Ring& hole : poly.holes) collect_crossings(hole, y, xs);
        if (xs.empty()) continue;
        std::sort(xs.begin(), xs.end());
        for (std::size_t c = 0; c < ncols; ++c) {
          if (owner[c]) continue;
          const double x = origin.x + (static_cast<double>(first_col + static_cast<long long>(c)) + 0.5) * cell_size_m;
          if (x < xs.front() || x >= xs.back()) continue;
          // Crossings strictly to the right of x.
          const auto right = xs.end() - std::upper_bound(xs.begin(), xs.end(), x);
          if (right % 2 == 1) {
            owner[c] = 1;
            row_population[c] = d.density_per_km2 * cell_area_km2;
          }
        }
      }
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!owner[c] || !(row_population[c] > 0.0)) continue;
      const double x = origin.x + (static_cast<double>(first_col + static_cast<long long>(c)) + 0.5) * cell_size_m;
      grid.cells.push_back({{x, y}, row_population[c]});
      grid.total_population += row_population[c];
    }
  }
  if (grid.cells.empty()) {
    throw MetroError(ErrorKind::EmptyGrid, "no populated cell centroid falls inside any district; reduce cell size");
  }
  return grid;
}

}  // namespace metro
