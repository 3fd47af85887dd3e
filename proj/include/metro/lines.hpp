#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "metro/evolve.hpp"
#include "metro/geo.hpp"
#include "metro/netgraph.hpp"
#include "metro/rng.hpp"

namespace metro {

/// L lines over a fixed station set. A line and its reverse describe the
/// same route; see canonical().
struct LineGenome {
  std::vector<Line> lines;

  friend bool operator==(const LineGenome&, const LineGenome&) = default;
};

struct LineFitness {
  /// Sum over unordered pairs i < j of d_ij * (s_i + s_j), meter-persons.
  double value = 0.0;
  bool feasible = false;
};

/// Finite penalty charged to disconnected layouts: 1000 times an upper bound
/// on any connected layout's fitness, (K-1)^2 * diameter * sum(s).
double infeasible_penalty(std::span<const PlanarPoint> stations, std::span<const double> serviced);

LineFitness line_fitness(const LineGenome& genome, std::span<const PlanarPoint> stations,
                         std::span<const double> serviced, double transfer_penalty_m = 0.0);

enum class LineMutation {
  ExchangeWithin,    // swap two positions within a line
  ReverseSubseries,  // reverse a contiguous run within a line
  ExchangeBetween,   // trade one station between two lines
  Transfer,          // move a station from one line to another
  Removal,           // drop a station from a line of length >= 3
  Addition,          // insert a station the line does not yet visit
};

inline constexpr std::array<LineMutation, 6> kLineMutations = {
    LineMutation::ExchangeWithin, LineMutation::ReverseSubseries, LineMutation::ExchangeBetween,
    LineMutation::Transfer,       LineMutation::Removal,          LineMutation::Addition,
};

/// Reverses positions first..last inclusive.
void reverse_subseries(Line& line, std::size_t first, std::size_t last);

/// One attempt at the given mutation with random positions; nullopt when it
/// does not apply (e.g. removal from a 2-station line, a duplicate insert).
std::optional<LineGenome> apply_line_mutation(const LineGenome& genome, LineMutation kind,
                                              std::size_t station_count, Rng& rng);

/// Picks a mutation type uniformly; inapplicable draws are retried up to 16
/// times before falling back to a sub-series reversal.
LineGenome mutate_lines(const LineGenome& genome, std::size_t station_count, Rng& rng);

/// Children exchange line `k`.
std::pair<LineGenome, LineGenome> swap_line(const LineGenome& a, const LineGenome& b, std::size_t k);

/// swap_line at a uniformly chosen index. Children are not repaired here.
std::pair<LineGenome, LineGenome> crossover_lines(const LineGenome& a, const LineGenome& b, Rng& rng);

/// Restores structural validity and connectivity deterministically:
/// drops out-of-range and repeated stations (keeping the first visit),
/// extends lines shorter than two with the nearest station, then joins
/// components one at a time. Each join takes the closest pair (u, v) with u
/// in station 0's component and v outside it and appends across at the
/// cheapest line end: v onto a line of u's component, or u onto a line of
/// v's component. Throws RepairFailed for fewer than 2 stations or no lines.
LineGenome repair_lines(LineGenome genome, std::span<const PlanarPoint> stations);

/// Per-line uniqueness, length >= 2, in-range indices.
bool is_structurally_valid(const LineGenome& genome, std::size_t station_count);

/// Structurally valid, exactly `line_count` lines, connected over all stations.
bool is_valid_layout(const LineGenome& genome, std::size_t station_count, std::size_t line_count);

/// Orients each line so its smaller endpoint comes first.
LineGenome canonical(LineGenome genome);

/// Random layouts: shuffled stations split into L contiguous groups, each
/// ordered by nearest-neighbour chaining from a random start, then repaired.
/// Groups with fewer than two stations borrow their nearest neighbour.
std::vector<LineGenome> init_lines(std::span<const PlanarPoint> stations, std::size_t line_count,
                                   std::size_t population_size, Rng& rng);

struct LineStageConfig {
  std::size_t line_count = 5;
  double transfer_penalty_m = 0.0;
  GaConfig ga;

  void validate() const;
};

struct LineStageResult {
  LineGenome best;
  LineFitness fitness;
  EvolutionHistory history;
};

using LineObserver = std::function<void(std::size_t, std::span<const LineGenome>)>;

/// Minimizes line_fitness over layouts of `line_count` lines.
LineStageResult optimize_lines(std::span<const PlanarPoint> stations, std::span<const double> serviced,
                               const LineStageConfig& config, const LineObserver& observer = {});

}  // namespace metro
