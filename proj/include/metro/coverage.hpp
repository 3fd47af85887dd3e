#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metro/demand.hpp"
#include "metro/geo.hpp"

namespace metro {

enum class CoverageMode {
  /// Every station collects Gaussian-weighted demand from every source, so
  /// overlapping catchments count residents more than once.
  Sum,
  /// Each source contributes only to its nearest station (lowest index on ties).
  Nearest,
};

struct CoverageParams {
  double sigma_m = 800.0;
  CoverageMode mode = CoverageMode::Sum;

  /// Throws InvalidConfig unless 0 < sigma < 1e5 m.
  void validate() const;
};

/// Message when sigma lies outside the usual 400-3000 m access range.
std::optional<std::string> sigma_warning(double sigma_m);

struct CoverageReport {
  double total = 0.0;
  /// s_i: district share plus generator share, per station.
  std::vector<double> per_station;
  std::vector<double> district_share;
  std::vector<double> generator_share;
};

/// n_i = sum over cells of pop * exp(-r^2 / sigma^2).
std::vector<double> district_coverage(std::span<const PlanarPoint> stations, const DemandGrid& grid,
                                      const CoverageParams& params);

/// Per-station sum over generators of g_j * exp(-r_ij^2 / sigma^2).
std::vector<double> generator_coverage(std::span<const PlanarPoint> stations,
                                       std::span<const GeneratorPoint> generators, const CoverageParams& params);

/// Full stage-1 objective and the per-station serviced population.
CoverageReport evaluate_coverage(std::span<const PlanarPoint> stations, const DemandGrid& grid,
                                 std::span<const GeneratorPoint> generators, const CoverageParams& params);

}  // namespace metro
