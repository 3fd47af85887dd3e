#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "metro/error.hpp"
#include "metro/rng.hpp"

namespace metro {

enum class Sense { Maximize, Minimize };

/// `Shifted` maps fitness to f - min + eps (maximize) or max - f + eps
/// (minimize); `Raw` uses non-negative fitness values directly.
enum class SelectionWeighting { Shifted, Raw };

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t generations = 10;
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  std::size_t elite_count = 2;
  std::uint64_t rng_seed = 42;
  Sense sense = Sense::Maximize;
  /// Fitness worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidConfig.
  void validate() const;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  /// Population slot holding the generation's best genome.
  std::size_t best_index = 0;
};

struct EvolutionHistory {
  std::vector<GenerationRecord> records;

  /// `generation,best_fitness,mean_fitness` with shortest round-trip numbers.
  std::string to_csv() const;
};

std::vector<double> roulette_weights(std::span<const double> fitness, Sense sense,
                                     SelectionWeighting weighting = SelectionWeighting::Shifted);

/// Fitness-proportionate sampler built once per generation.
class RouletteWheel {
 public:
  RouletteWheel(std::span<const double> fitness, Sense sense,
                SelectionWeighting weighting = SelectionWeighting::Shifted);

  std::size_t spin(Rng& rng) const;
  double probability(std::size_t index) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

std::size_t roulette_select(std::span<const double> fitness, Sense sense, Rng& rng,
                            SelectionWeighting weighting = SelectionWeighting::Shifted);

inline bool is_better(double a, double b, Sense sense) noexcept {
  return sense == Sense::Maximize ? a > b : a < b;
}

namespace detail {

/// Static partition of [0, n) across worker threads; fn(i) must only touch
/// slot i. The first exception thrown (by index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Operators plugged into the generation loop. `crossover`, `repair`,
/// `is_valid` and `on_generation` may be left empty.
template <class Genome>
struct GaProblem {
  std::function<double(const Genome&)> fitness;
  std::function<std::pair<Genome, Genome>(const Genome&, const Genome&, Rng&)> crossover;
  std::function<Genome(const Genome&, Rng&)> mutate;
  std::function<Genome(Genome)> repair;
  std::function<bool(const Genome&)> is_valid;
  /// Called with every generation (0 = initial population) after evaluation.
  std::function<void(std::size_t, std::span<const Genome>, std::span<const double>)> on_generation;
};

template <class Genome>
struct GaResult {
  Genome best;
  double best_fitness = 0.0;
  EvolutionHistory history;
};

/// Generational GA with elitism and roulette parent selection.
///
/// Each generation copies the `elite_count` best genomes unchanged, then fills
/// the remaining slots by drawing two parents, recombining them with
/// probability `crossover_rate` (otherwise cloning the fitter parent),
/// mutating each child with probability `mutation_rate` and passing it
/// through `repair`. Offspring draws come from Rng::stream(seed, generation,
/// slot); only fitness evaluation runs in parallel, so the result does not
/// depend on the thread count.
template <class Genome>
GaResult<Genome> run_evolution(std::vector<Genome> population, const GaProblem<Genome>& problem,
                               const GaConfig& config) {
  config.validate();
  const std::size_t size = config.population_size;
  if (population.size() != size) {
    throw MetroError(ErrorKind::InvalidInitialPopulation,
                     "expected " + std::to_string(size) + " individuals, got " + std::to_string(population.size()));
  }
  if (problem.is_valid) {
    for (std::size_t i = 0; i < size; ++i) {
      if (!problem.is_valid(population[i])) {
        throw MetroError(ErrorKind::InvalidInitialPopulation, "individual " + std::to_string(i) + " is invalid");
      }
    }
  }

  std::vector<double> fitness(size);
  auto evaluate = [&](std::size_t generation, std::size_t first) {
    detail::parallel_for(size - first, config.threads,
                         [&](std::size_t k) { fitness[first + k] = problem.fitness(population[first + k]); });
    for (std::size_t i = first; i < size; ++i) {
      if (!std::isfinite(fitness[i])) {
        throw MetroError(ErrorKind::FitnessNotFinite,
                         "generation " + std::to_string(generation) + ", individual " + std::to_string(i));
      }
    }
  };

  GaResult<Genome> result;
  auto record = [&](std::size_t generation) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < size; ++i) {
      if (is_better(fitness[i], fitness[best], config.sense)) best = i;
    }
    double sum = 0.0;
    for (double f : fitness) sum += f;
    result.history.records.push_back({generation, fitness[best], sum / static_cast<double>(size), best});
    if (generation == 0 || is_better(fitness[best], result.best_fitness, config.sense)) {
      result.best = population[best];
      result.best_fitness = fitness[best];
    }
    if (problem.on_generation) problem.on_generation(generation, population, fitness);
  };

  evaluate(0, 0);
  record(0);

  std::vector<std::size_t> order(size);
  for (std::size_t generation = 1; generation <= config.generations; ++generation) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return is_better(fitness[a], fitness[b], config.sense);
    });

    std::vector<Genome> next;
    std::vector<double> next_fitness;
    next.reserve(size);
    for (std::size_t e = 0; e < config.elite_count; ++e) {
      next.push_back(population[order[e]]);
      next_fitness.push_back(fitness[order[e]]);
    }

    const RouletteWheel wheel(fitness, config.sense);
    for (std::size_t slot = 0; next.size() < size; ++slot) {
      Rng rng = Rng::stream(config.rng_seed, generation, slot);
      const std::size_t a = wheel.spin(rng);
      const std::size_t b = wheel.spin(rng);
      std::vector<Genome> children;
      if (problem.crossover && rng.bernoulli(config.crossover_rate)) {
        auto [first, second] = problem.crossover(population[a], population[b], rng);
        children.push_back(std::move(first));
        children.push_back(std::move(second));
      } else {
        children.push_back(is_better(fitness[b], fitness[a], config.sense) ? population[b] : population[a]);
      }
      for (Genome& child : children) {
        if (next.size() == size) break;
        if (problem.mutate && rng.bernoulli(config.mutation_rate)) child = problem.mutate(child, rng);
        if (problem.repair) child = problem.repair(std::move(child));
        if (problem.is_valid && !problem.is_valid(child)) {
          throw MetroError(ErrorKind::InvalidGenome, "offspring failed validation in generation " +
                                                         std::to_string(generation));
        }
        next.push_back(std::move(child));
      }
    }

    population = std::move(next);
    std::copy(next_fitness.begin(), next_fitness.end(), fitness.begin());
    evaluate(generation, config.elite_count);
    record(generation);
  }
  return result;
}

}  // namespace metro
