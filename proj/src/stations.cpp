#include "metro/stations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metro/error.hpp"

namespace metro {

namespace {

constexpr int kPlacementRetries = 16;
constexpr double kResidentsPerStation = 150'000.0;

}  // namespace

void StationStageConfig::validate() const {
  if (station_count < 1) throw MetroError(ErrorKind::InvalidConfig, "station count must be >= 1");
  if (!(mutation_sigma_m > 0.0) || !std::isfinite(mutation_sigma_m)) {
    throw MetroError(ErrorKind::InvalidConfig, "station mutation sigma must be positive");
  }
  ga.validate();
  coverage.validate();
}

std::size_t suggest_station_count(double total_population) {
  const double k = std::round(total_population / kResidentsPerStation);
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::max(0.0, k)));
}

bool is_valid_station_genome(const StationGenome& genome, std::size_t station_count, const Region& region) {
  if (genome.stations.size() != station_count) return false;
  return std::all_of(genome.stations.begin(), genome.stations.end(), [&](PlanarPoint p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && region.contains_within(p, kStationSnapToleranceM);
  });
}

std::vector<StationGenome> init_station_population(const DemandGrid& grid, const Region& region,
                                                   std::size_t station_count, std::size_t population_size, Rng& rng) {
  if (grid.cells.empty()) throw MetroError(ErrorKind::EmptyGrid, "cannot place stations on an empty grid");
  std::vector<double> cumulative(grid.cells.size());
  std::transform_inclusive_scan(grid.cells.begin(), grid.cells.end(), cumulative.begin(), std::plus<>(),
                                [](const DemandCell& c) { return c.population; });
  const double total = cumulative.back();
  if (!(total > 0.0)) throw MetroError(ErrorKind::EmptyGrid, "grid holds no population");

  const double half = 0.5 * grid.cell_size_m;
  std::vector<StationGenome> population(population_size);
  for (StationGenome& genome : population) {
    genome.stations.reserve(station_count);
    for (std::size_t k = 0; k < station_count; ++k) {
      const double target = rng.uniform() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
      const auto cell_index = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
      const PlanarPoint centroid = grid.cells[cell_index].centroid;
      PlanarPoint placed = centroid;
      for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
        const PlanarPoint candidate{centroid.x + rng.uniform(-half, half), centroid.y + rng.uniform(-half, half)};
        if (region.contains(candidate)) {
          placed = candidate;
          break;
        }
      }
      genome.stations.push_back(placed);
    }
  }
  return population;
}

StationGenome mutate_stations(const StationGenome& genome, double sigma_m, Rng& rng, const Region& region) {
  StationGenome out = genome;
  if (out.stations.empty()) return out;
  const std::size_t i = rng.index(out.stations.size());
  const PlanarPoint from = out.stations[i];
  PlanarPoint candidate = from;
  for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
    const double dx = rng.normal(0.0, sigma_m);
    const double dy = rng.normal(0.0, sigma_m);
    candidate = {from.x + dx, from.y + dy};
    if (region.contains(candidate)) {
      out.stations[i] = candidate;
      return out;
    }
  }
  out.stations[i] = region.nearest_boundary_point(candidate);
  return out;
}

std::pair<StationGenome, StationGenome> crossover_stations(const StationGenome& a, const StationGenome& b, Rng& rng) {
  StationGenome child_a = a;
  StationGenome child_b = b;
  const std::size_t n = std::min(a.stations.size(), b.stations.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(0.5)) std::swap(child_a.stations[i], child_b.stations[i]);
  }
  return {std::move(child_a), std::move(child_b)};
}

StationStageResult optimize_stations(const Region& region, const DemandGrid& grid,
                                     std::span<const GeneratorPoint> generators, const StationStageConfig& config,
                                     const StationObserver& observer) {
  config.validate();
  GaConfig ga = config.ga;
  ga.sense = Sense::Maximize;

  // Initial placements use their own stream, disjoint from the offspring
  // streams keyed by generation >= 1.
  Rng init_rng = Rng::stream(ga.rng_seed, 0, 0);
  auto initial = init_station_population(grid, region, config.station_count, ga.population_size, init_rng);

  GaProblem<StationGenome> problem;
  problem.fitness = [&](const StationGenome& g) {
    return evaluate_coverage(g.stations, grid, generators, config.coverage).total;
  };
  problem.crossover = crossover_stations;
  problem.mutate = [&](const StationGenome& g, Rng& rng) {
    return mutate_stations(g, config.mutation_sigma_m, rng, region);
  };
  problem.is_valid = [&](const StationGenome& g) {
    return is_valid_station_genome(g, config.station_count, region);
  };
  if (observer) {
    problem.on_generation = [&](std::size_t gen, std::span<const StationGenome> pop, std::span<const double>) {
      observer(gen, pop);
    };
  }

  auto outcome = run_evolution(std::move(initial), problem, ga);
  StationStageResult result;
  result.report = evaluate_coverage(outcome.best.stations, grid, generators, config.coverage);
  result.best = std::move(outcome.best);
  result.history = std::move(outcome.history);
  return result;
}

}  // namespace metro
