#include "metro/lines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metro/error.hpp"

namespace metro {

namespace {

constexpr int kMutationRetries = 16;
constexpr double kPenaltyFactor = 1e3;

bool visits(const Line& line, StationIndex s) { return std::find(line.begin(), line.end(), s) != line.end(); }

// Two distinct positions in [0, n), n >= 2.
std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n, Rng& rng) {
  const std::size_t i = rng.index(n);
  std::size_t j = rng.index(n - 1);
  if (j >= i) ++j;
  return {i, j};
}

// Index of the line other than `p`, uniformly; requires >= 2 lines.
std::size_t other_line(std::size_t count, std::size_t p, Rng& rng) {
  std::size_t q = rng.index(count - 1);
  if (q >= p) ++q;
  return q;
}

StationIndex nearest_outside(const Line& line, StationIndex from, std::span<const PlanarPoint> stations) {
  StationIndex best = stations.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (StationIndex s = 0; s < stations.size(); ++s) {
    if (s == from || visits(line, s)) continue;
    const double d2 = squared_distance(stations[from], stations[s]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = s;
    }
  }
  return best;
}

Line nearest_neighbour_chain(std::vector<StationIndex> group, std::span<const PlanarPoint> stations, Rng& rng) {
  Line chain;
  chain.reserve(group.size());
  std::swap(group[0], group[rng.index(group.size())]);
  chain.push_back(group[0]);
  group.erase(group.begin());
  while (!group.empty()) {
    const PlanarPoint tail = stations[chain.back()];
    std::size_t pick = 0;
    for (std::size_t k = 1; k < group.size(); ++k) {
      const double dk = squared_distance(tail, stations[group[k]]);
      const double dp = squared_distance(tail, stations[group[pick]]);
      if (dk < dp || (dk == dp && group[k] < group[pick])) pick = k;
    }
    chain.push_back(group[pick]);
    group.erase(group.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return chain;
}

// Candidate join: append `station` to the front or back of `line`.
struct Join {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t line = 0;
  bool at_front = false;
  StationIndex station = 0;
};

void consider(Join& best, const LineGenome& g, std::size_t l, StationIndex station,
              std::span<const PlanarPoint> stations) {
  const Line& line = g.lines[l];
  const double front = distance(stations[line.front()], stations[station]);
  const double back = distance(stations[line.back()], stations[station]);
  if (front < best.cost) best = {front, l, true, station};
  if (back < best.cost) best = {back, l, false, station};
}

}  // namespace

double infeasible_penalty(std::span<const PlanarPoint> stations, std::span<const double> serviced) {
  const std::size_t k = stations.size();
  double diameter = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) diameter = std::max(diameter, distance(stations[i], stations[j]));
  }
  const double total = std::accumulate(serviced.begin(), serviced.end(), 0.0);
  const double km1 = k > 0 ? static_cast<double>(k - 1) : 0.0;
  return kPenaltyFactor * std::max(1.0, km1 * km1 * diameter * total);
}

LineFitness line_fitness(const LineGenome& genome, std::span<const PlanarPoint> stations,
                         std::span<const double> serviced, double transfer_penalty_m) {
  const LineNetwork net = LineNetwork::build(genome.lines, stations);
  if (!is_connected(net)) return {infeasible_penalty(stations, serviced), false};
  const DistanceMatrix d = all_pairs_distances(net, transfer_penalty_m);
  double value = 0.0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    for (std::size_t j = i + 1; j < stations.size(); ++j) value += d(i, j) * (serviced[i] + serviced[j]);
  }
  return {value, true};
}

void reverse_subseries(Line& line, std::size_t first, std::size_t last) {
  if (first > last) std::swap(first, last);
  std::reverse(line.begin() + static_cast<std::ptrdiff_t>(first), line.begin() + static_cast<std::ptrdiff_t>(last) + 1);
}

std::optional<LineGenome> apply_line_mutation(const LineGenome& genome, LineMutation kind,
                                              std::size_t station_count, Rng& rng) {
  if (genome.lines.empty()) return std::nullopt;
  LineGenome out = genome;
  auto& lines = out.lines;
  const std::size_t count = lines.size();

  switch (kind) {
    case LineMutation::ExchangeWithin: {
      Line& line = lines[rng.index(count)];
      if (line.size() < 2) return std::nullopt;
      const auto [i, j] = distinct_pair(line.size(), rng);
      std::swap(line[i], line[j]);
      return out;
    }
    case LineMutation::ReverseSubseries: {
      Line& line = lines[rng.index(count)];
      if (line.size() < 2) return std::nullopt;
      const auto [i, j] = distinct_pair(line.size(), rng);
      reverse_subseries(line, i, j);
      return out;
    }
    case LineMutation::ExchangeBetween: {
      if (count < 2) return std::nullopt;
      const std::size_t p = rng.index(count);
      const std::size_t q = other_line(count, p, rng);
      Line& lp = lines[p];
      Line& lq = lines[q];
      const std::size_t i = rng.index(lp.size());
      const std::size_t j = rng.index(lq.size());
      const StationIndex x = lp[i];
      const StationIndex y = lq[j];
      if (x == y || visits(lq, x) || visits(lp, y)) return std::nullopt;
      lp[i] = y;
      lq[j] = x;
      return out;
    }
    case LineMutation::Transfer: {
      if (count < 2) return std::nullopt;
      const std::size_t p = rng.index(count);
      const std::size_t q = other_line(count, p, rng);
      Line& lp = lines[p];
      Line& lq = lines[q];
      if (lp.size() < 3) return std::nullopt;
      const std::size_t i = rng.index(lp.size());
      const StationIndex x = lp[i];
      if (visits(lq, x)) return std::nullopt;
      lp.erase(lp.begin() + static_cast<std::ptrdiff_t>(i));
      lq.insert(lq.begin() + static_cast<std::ptrdiff_t>(rng.index(lq.size() + 1)), x);
      return out;
    }
    case LineMutation::Removal: {
      Line& line = lines[rng.index(count)];
      if (line.size() < 3) return std::nullopt;
      line.erase(line.begin() + static_cast<std::ptrdiff_t>(rng.index(line.size())));
      return out;
    }
    case LineMutation::Addition: {
      Line& line = lines[rng.index(count)];
      if (station_count == 0) return std::nullopt;
      const StationIndex s = rng.index(station_count);
      if (visits(line, s)) return std::nullopt;
      line.insert(line.begin() + static_cast<std::ptrdiff_t>(rng.index(line.size() + 1)), s);
      return out;
    }
  }
  return std::nullopt;
}

LineGenome mutate_lines(const LineGenome& genome, std::size_t station_count, Rng& rng) {
  for (int attempt = 0; attempt < kMutationRetries; ++attempt) {
    const LineMutation kind = kLineMutations[rng.index(kLineMutations.size())];
    if (auto mutated = apply_line_mutation(genome, kind, station_count, rng)) return std::move(*mutated);
  }
  if (auto mutated = apply_line_mutation(genome, LineMutation::ReverseSubseries, station_count, rng)) {
    return std::move(*mutated);
  }
  return genome;
}

std::pair<LineGenome, LineGenome> swap_line(const LineGenome& a, const LineGenome& b, std::size_t k) {
  LineGenome child_a = a;
  LineGenome child_b = b;
  if (k < child_a.lines.size() && k < child_b.lines.size()) std::swap(child_a.lines[k], child_b.lines[k]);
  return {std::move(child_a), std::move(child_b)};
}

std::pair<LineGenome, LineGenome> crossover_lines(const LineGenome& a, const LineGenome& b, Rng& rng) {
  const std::size_t count = std::min(a.lines.size(), b.lines.size());
  if (count == 0) return {a, b};
  return swap_line(a, b, rng.index(count));
}

LineGenome repair_lines(LineGenome genome, std::span<const PlanarPoint> stations) {
  const std::size_t k = stations.size();
  if (k < 2) throw MetroError(ErrorKind::RepairFailed, "need at least 2 stations");
  if (genome.lines.empty()) throw MetroError(ErrorKind::RepairFailed, "genome has no lines");

  for (Line& line : genome.lines) {
    Line cleaned;
    cleaned.reserve(line.size());
    for (StationIndex s : line) {
      if (s < k && !visits(cleaned, s)) cleaned.push_back(s);
    }
    if (cleaned.empty()) cleaned.push_back(0);
    while (cleaned.size() < 2) cleaned.push_back(nearest_outside(cleaned, cleaned.back(), stations));
    line = std::move(cleaned);
  }

  // Every join merges two components, so at most k - 1 rounds are needed.
  for (std::size_t round = 0; round < k; ++round) {
    const LineNetwork net = LineNetwork::build(genome.lines, stations);
    const std::vector<std::size_t> label = component_labels(net);
    if (std::all_of(label.begin(), label.end(), [](std::size_t c) { return c == 0; })) return genome;

    StationIndex u = 0;
    StationIndex v = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (StationIndex a = 0; a < k; ++a) {
      if (label[a] != 0) continue;
      for (StationIndex b = 0; b < k; ++b) {
        if (label[b] == 0) continue;
        const double d2 = squared_distance(stations[a], stations[b]);
        if (d2 < best_d2) {
          best_d2 = d2;
          u = a;
          v = b;
        }
      }
    }

    Join join;
    for (std::size_t l = 0; l < genome.lines.size(); ++l) {
      if (label[genome.lines[l].front()] == 0) consider(join, genome, l, v, stations);
    }
    for (std::size_t l = 0; l < genome.lines.size(); ++l) {
      if (label[genome.lines[l].front()] == label[v]) consider(join, genome, l, u, stations);
    }
    if (!std::isfinite(join.cost)) {
      // u and v are both on no line; absorb v into whichever line ends nearest.
      for (std::size_t l = 0; l < genome.lines.size(); ++l) consider(join, genome, l, v, stations);
    }
    Line& line = genome.lines[join.line];
    if (join.at_front) {
      line.insert(line.begin(), join.station);
    } else {
      line.push_back(join.station);
    }
  }
  const LineNetwork net = LineNetwork::build(genome.lines, stations);
  if (!is_connected(net)) throw MetroError(ErrorKind::RepairFailed, "network still disconnected after repair");
  return genome;
}

bool is_structurally_valid(const LineGenome& genome, std::size_t station_count) {
  std::vector<char> seen(station_count, 0);
  for (const Line& line : genome.lines) {
    if (line.size() < 2) return false;
    bool ok = true;
    for (StationIndex s : line) {
      if (s >= station_count || seen[s]) {
        ok = false;
        break;
      }
      seen[s] = 1;
    }
    for (StationIndex s : line) {
      if (s < station_count) seen[s] = 0;
    }
    if (!ok) return false;
  }
  return true;
}

bool is_valid_layout(const LineGenome& genome, std::size_t station_count, std::size_t line_count) {
  if (genome.lines.size() != line_count || !is_structurally_valid(genome, station_count)) return false;
  // Station positions do not affect connectivity; any placeholder frame works.
  const std::vector<PlanarPoint> placeholder(station_count);
  return is_connected(LineNetwork::build(genome.lines, placeholder));
}

LineGenome canonical(LineGenome genome) {
  for (Line& line : genome.lines) {
    if (line.size() >= 2 && line.back() < line.front()) std::reverse(line.begin(), line.end());
  }
  return genome;
}

std::vector<LineGenome> init_lines(std::span<const PlanarPoint> stations, std::size_t line_count,
                                   std::size_t population_size, Rng& rng) {
  const std::size_t k = stations.size();
  if (k < 2) throw MetroError(ErrorKind::TooFewStations, "line layouts need at least 2 stations");
  if (line_count < 1) throw MetroError(ErrorKind::InvalidConfig, "line count must be >= 1");

  std::vector<LineGenome> population;
  population.reserve(population_size);
  std::vector<StationIndex> order(k);
  for (std::size_t n = 0; n < population_size; ++n) {
    std::iota(order.begin(), order.end(), StationIndex{0});
    rng.shuffle(order.begin(), order.end());

    LineGenome genome;
    const std::size_t base = k / line_count;
    const std::size_t extra = k % line_count;
    std::size_t pos = 0;
    for (std::size_t l = 0; l < line_count; ++l) {
      const std::size_t size = base + (l < extra ? 1 : 0);
      std::vector<StationIndex> group(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                      order.begin() + static_cast<std::ptrdiff_t>(pos + size));
      pos += size;
      Line line;
      if (group.empty()) {
        line.push_back(rng.index(k));
      } else {
        line = nearest_neighbour_chain(std::move(group), stations, rng);
      }
      if (line.size() < 2) line.push_back(nearest_outside(line, line.back(), stations));
      genome.lines.push_back(std::move(line));
    }
    population.push_back(repair_lines(std::move(genome), stations));
  }
  return population;
}

void LineStageConfig::validate() const {
  if (line_count < 1) throw MetroError(ErrorKind::InvalidConfig, "line count must be >= 1");
  if (!(transfer_penalty_m >= 0.0) || !std::isfinite(transfer_penalty_m)) {
    throw MetroError(ErrorKind::InvalidConfig, "transfer penalty must be a non-negative length");
  }
  ga.validate();
}

LineStageResult optimize_lines(std::span<const PlanarPoint> stations, std::span<const double> serviced,
                               const LineStageConfig& config, const LineObserver& observer) {
  config.validate();
  if (stations.size() < 2) throw MetroError(ErrorKind::TooFewStations, "line layouts need at least 2 stations");
  if (serviced.size() != stations.size()) {
    throw MetroError(ErrorKind::InvalidConfig, "serviced population count does not match station count");
  }
  GaConfig ga = config.ga;
  ga.sense = Sense::Minimize;
  const std::size_t k = stations.size();

  Rng init_rng = Rng::stream(ga.rng_seed, 0, 0);
  auto initial = init_lines(stations, config.line_count, ga.population_size, init_rng);

  GaProblem<LineGenome> problem;
  problem.fitness = [&](const LineGenome& g) {
    return line_fitness(g, stations, serviced, config.transfer_penalty_m).value;
  };
  problem.crossover = crossover_lines;
  problem.mutate = [k](const LineGenome& g, Rng& rng) { return mutate_lines(g, k, rng); };
  problem.repair = [&](LineGenome g) { return repair_lines(std::move(g), stations); };
  problem.is_valid = [&](const LineGenome& g) { return is_valid_layout(g, k, config.line_count); };
  if (observer) {
    problem.on_generation = [&](std::size_t gen, std::span<const LineGenome> pop, std::span<const double>) {
      observer(gen, pop);
    };
  }

  auto outcome = run_evolution(std::move(initial), problem, ga);
  LineStageResult result;
  result.fitness = line_fitness(outcome.best, stations, serviced, config.transfer_penalty_m);
  if (!result.fitness.feasible) throw MetroError(ErrorKind::NoFeasibleIndividual, "best layout is disconnected");
  result.best = std::move(outcome.best);
  result.history = std::move(outcome.history);
  return result;
}

}  // namespace metro
