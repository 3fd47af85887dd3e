#include "metro/coverage.hpp"

#include <cmath>
#include <sstream>

#include "metro/error.hpp"

namespace metro {

namespace {

constexpr double kSigmaHardMax = 1e5;
constexpr double kSigmaTypicalMin = 400.0;
constexpr double kSigmaTypicalMax = 3000.0;

// Accumulates weight * exp(-r^2/sigma^2) from one source into `shares`.
void accumulate(std::span<const PlanarPoint> stations, PlanarPoint source, double weight, double inv_sigma2,
                CoverageMode mode, std::vector<double>& shares) {
  if (mode == CoverageMode::Sum) {
    for (std::size_t i = 0; i < stations.size(); ++i) {
      shares[i] += weight * std::exp(-squared_distance(stations[i], source) * inv_sigma2);
    }
    return;
  }
  std::size_t nearest = 0;
  double best = squared_distance(stations[0], source);
  for (std::size_t i = 1; i < stations.size(); ++i) {
    const double d2 = squared_distance(stations[i], source);
    if (d2 < best) {
      best = d2;
      nearest = i;
    }
  }
  shares[nearest] += weight * std::exp(-best * inv_sigma2);
}

}  // namespace

void CoverageParams::validate() const {
  if (!(sigma_m > 0.0) || !(sigma_m < kSigmaHardMax)) {
    std::ostringstream msg;
    msg << "sigma must lie in (0, 1e5) m, got " << sigma_m;
    throw MetroError(ErrorKind::InvalidConfig, msg.str());
  }
}

std::optional<std::string> sigma_warning(double sigma_m) {
  if (sigma_m >= kSigmaTypicalMin && sigma_m <= kSigmaTypicalMax) return std::nullopt;
  std::ostringstream msg;
  msg << "sigma = " << sigma_m << " m is outside the typical 400-3000 m station access range";
  return msg.str();
}

std::vector<double> district_coverage(std::span<const PlanarPoint> stations, const DemandGrid& grid,
                                      const CoverageParams& params) {
  params.validate();
  std::vector<double> shares(stations.size(), 0.0);
  if (stations.empty()) return shares;
  const double inv_sigma2 = 1.0 / (params.sigma_m * params.sigma_m);
  for (const DemandCell& cell : grid.cells) {
    accumulate(stations, cell.centroid, cell.population, inv_sigma2, params.mode, shares);
  }
  return shares;
}

std::vector<double> generator_coverage(std::span<const PlanarPoint> stations,
                                       std::span<const GeneratorPoint> generators, const CoverageParams& params) {
  params.validate();
  std::vector<double> shares(stations.size(), 0.0);
  if (stations.empty()) return shares;
  const double inv_sigma2 = 1.0 / (params.sigma_m * params.sigma_m);
  for (const GeneratorPoint& g : generators) {
    accumulate(stations, g.position, g.visitors_per_day, inv_sigma2, params.mode, shares);
  }
  return shares;
}

CoverageReport evaluate_coverage(std::span<const PlanarPoint> stations, const DemandGrid& grid,
                                 std::span<const GeneratorPoint> generators, const CoverageParams& params) {
  CoverageReport report;
  report.district_share = district_coverage(stations, grid, params);
  report.generator_share = generator_coverage(stations, generators, params);
  report.per_station.resize(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    report.per_station[i] = report.district_share[i] + report.generator_share[i];
    report.total += report.per_station[i];
  }
  return report;
}

}  // namespace metro
