#include "metro/evolve.hpp"

#include <charconv>
#include <sstream>

namespace metro {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void GaConfig::validate() const {
  auto fail = [](const std::string& msg) { throw MetroError(ErrorKind::InvalidConfig, msg); };
  if (population_size < 2) fail("population_size must be >= 2");
  if (elite_count >= population_size) fail("elite_count must be < population_size");
  if (generations < 1) fail("generations must be >= 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate must lie in [0, 1]");
}

std::string EvolutionHistory::to_csv() const {
  std::ostringstream out;
  out << "generation,best_fitness,mean_fitness\n";
  for (const GenerationRecord& r : records) {
    out << r.generation << ',' << format_double(r.best_fitness) << ',' << format_double(r.mean_fitness) << '\n';
  }
  return out.str();
}

std::vector<double> roulette_weights(std::span<const double> fitness, Sense sense, SelectionWeighting weighting) {
  std::vector<double> weights(fitness.begin(), fitness.end());
  if (fitness.empty()) return weights;
  if (weighting == SelectionWeighting::Raw) {
    double sum = 0.0;
    for (double& w : weights) {
      w = std::max(w, 0.0);
      sum += w;
    }
    if (!(sum > 0.0)) std::fill(weights.begin(), weights.end(), 1.0);
    return weights;
  }
  const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
  const double spread = *hi - *lo;
  if (spread == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
    return weights;
  }
  const double eps = 1e-6 * (spread + 1.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = (sense == Sense::Maximize ? fitness[i] - *lo : *hi - fitness[i]) + eps;
  }
  return weights;
}

RouletteWheel::RouletteWheel(std::span<const double> fitness, Sense sense, SelectionWeighting weighting) {
  if (fitness.empty()) throw MetroError(ErrorKind::InvalidConfig, "roulette over an empty population");
  const std::vector<double> weights = roulette_weights(fitness, sense, weighting);
  cumulative_.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
}

std::size_t RouletteWheel::spin(Rng& rng) const {
  const double target = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

double RouletteWheel::probability(std::size_t index) const {
  const double below = index == 0 ? 0.0 : cumulative_[index - 1];
  return (cumulative_[index] - below) / cumulative_.back();
}

std::size_t roulette_select(std::span<const double> fitness, Sense sense, Rng& rng, SelectionWeighting weighting) {
  return RouletteWheel(fitness, sense, weighting).spin(rng);
}

}  // namespace metro
