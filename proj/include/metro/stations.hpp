#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "metro/coverage.hpp"
#include "metro/demand.hpp"
#include "metro/evolve.hpp"
#include "metro/region.hpp"
#include "metro/rng.hpp"

namespace metro {

/// Stations may sit up to this far outside every district (boundary snap).
inline constexpr double kStationSnapToleranceM = 50.0;

/// Candidate set of K station positions. Slot order carries no meaning.
struct StationGenome {
  std::vector<PlanarPoint> stations;

  friend bool operator==(const StationGenome&, const StationGenome&) = default;
};

struct StationStageConfig {
  std::size_t station_count = 0;
  double mutation_sigma_m = 1000.0;
  GaConfig ga;
  CoverageParams coverage;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Rule-of-thumb station count, one station per 150 000 residents (at least
/// two). Not derived from data; use when no count is configured.
std::size_t suggest_station_count(double total_population);

bool is_valid_station_genome(const StationGenome& genome, std::size_t station_count, const Region& region);

/// Stations drawn from cells with probability proportional to population,
/// then jittered uniformly within the cell (the jitter is redrawn, and
/// finally dropped, if it leaves every district).
std::vector<StationGenome> init_station_population(const DemandGrid& grid, const Region& region,
                                                   std::size_t station_count, std::size_t population_size, Rng& rng);

/// Shifts one uniformly chosen station by N(0, sigma) in x and y. Offsets
/// landing outside the region are redrawn up to 16 times; the last one is
/// then clamped to the nearest district boundary point.
StationGenome mutate_stations(const StationGenome& genome, double sigma_m, Rng& rng, const Region& region);

/// Uniform per-slot crossover: each slot pair is swapped with probability 1/2.
std::pair<StationGenome, StationGenome> crossover_stations(const StationGenome& a, const StationGenome& b, Rng& rng);

struct StationStageResult {
  StationGenome best;
  CoverageReport report;
  EvolutionHistory history;
};

using StationObserver = std::function<void(std::size_t, std::span<const StationGenome>)>;

/// Maximizes total coverage over K station positions.
StationStageResult optimize_stations(const Region& region, const DemandGrid& grid,
                                     std::span<const GeneratorPoint> generators, const StationStageConfig& config,
                                     const StationObserver& observer = {});

}  // namespace metro
