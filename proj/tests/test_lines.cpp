#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "metro/error.hpp"
#include "metro/lines.hpp"
#include "oracles.hpp"

namespace metro {
namespace {

using testing::line_fitness_oracle;

std::vector<PlanarPoint> random_stations(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> coord(-8000, 8000);
  std::vector<PlanarPoint> s(n);
  for (auto& p : s) p = {coord(gen), coord(gen)};
  return s;
}

std::vector<double> random_serviced(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> pop(100, 50'000);
  std::vector<double> s(n);
  for (auto& v : s) v = pop(gen);
  return s;
}

std::multiset<StationIndex> placements(const Line& l) { return {l.begin(), l.end()}; }

std::size_t total_placements(const LineGenome& g) {
  std::size_t n = 0;
  for (const Line& l : g.lines) n += l.size();
  return n;
}

LineGenome random_valid_genome(std::mt19937_64& gen, std::size_t k, std::size_t l) {
  const auto stations = random_stations(gen, k);
  Rng rng(gen());
  return init_lines(stations, l, 1, rng).front();
}

TEST(LineFitness, SinglePair) {
  const std::vector<PlanarPoint> s{{0, 0}, {2000, 0}};
  const std::vector<double> serviced{1000, 3000};
  const LineFitness f = line_fitness(LineGenome{{{0, 1}}}, s, serviced);
  EXPECT_TRUE(f.feasible);
  EXPECT_DOUBLE_EQ(f.value, 8'000'000.0);
}

TEST(LineFitness, PathOfThree) {
  const std::vector<PlanarPoint> s{{0, 0}, {1000, 0}, {2000, 0}};
  const std::vector<double> serviced{1, 1, 1};
  EXPECT_DOUBLE_EQ(line_fitness(LineGenome{{{0, 1, 2}}}, s, serviced).value, 8000.0);
}

TEST(LineFitness, DisconnectedPaysPenalty) {
  const std::vector<PlanarPoint> s{{0, 0}, {1000, 0}, {0, 3000}, {4000, 0}};
  const std::vector<double> serviced{10, 20, 30, 40};
  const LineFitness f = line_fitness(LineGenome{{{0, 1}, {2, 3}}}, s, serviced);
  EXPECT_FALSE(f.feasible);
  // (K-1)^2 * diameter * sum(s), times 1000.
  double diameter = 0;
  for (auto a : s) {
    for (auto b : s) diameter = std::max(diameter, std::hypot(a.x - b.x, a.y - b.y));
  }
  const double bound = 9.0 * diameter * 100.0;
  EXPECT_DOUBLE_EQ(f.value, 1000.0 * bound);
  EXPECT_DOUBLE_EQ(infeasible_penalty(s, serviced), 1000.0 * bound);
  // Any connected layout costs less than the penalty.
  const double connected = line_fitness(LineGenome{{{2, 0, 1, 3}}}, s, serviced).value;
  EXPECT_LT(connected, f.value);
  EXPECT_LE(connected, bound);
}

TEST(LineFitness, MatchesFloydWarshallOracle) {
  std::mt19937_64 gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_stations(gen, 8);
    const auto serviced = random_serviced(gen, 8);
    Rng rng(gen());
    const LineGenome g = init_lines(s, 1 + trial % 4, 1, rng).front();
    const LineFitness f = line_fitness(g, s, serviced);
    ASSERT_TRUE(f.feasible);
    EXPECT_LT(testing::relative_error(f.value, line_fitness_oracle(g.lines, s, serviced)), 1e-9);
  }
}

TEST(Mutation, ReverseSubseries) {
  Line l{1, 2, 3, 4, 5};
  reverse_subseries(l, 1, 3);
  EXPECT_EQ(l, (Line{1, 4, 3, 2, 5}));
}

TEST(Mutation, RemovalFromShortLineInapplicable) {
  const LineGenome g{{{0, 1}, {1, 2}}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    EXPECT_FALSE(apply_line_mutation(g, LineMutation::Removal, 3, rng).has_value());
  }
}

TEST(Mutation, AdditionOutcomes) {
  const LineGenome g{{{0, 1}}};
  std::set<Line> seen;
  int inapplicable = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const auto m = apply_line_mutation(g, LineMutation::Addition, 3, rng);
    if (!m) {
      ++inapplicable;
      continue;
    }
    seen.insert(m->lines[0]);
  }
  EXPECT_EQ(seen, (std::set<Line>{{2, 0, 1}, {0, 2, 1}, {0, 1, 2}}));
  EXPECT_GT(inapplicable, 0);
}

TEST(Mutation, PerTypeInvariants) {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 6 + trial % 5;
    const LineGenome g = random_valid_genome(gen, k, 3);
    for (LineMutation kind : kLineMutations) {
      Rng rng(gen());
      const auto m = apply_line_mutation(g, kind, k, rng);
      if (!m) continue;
      ASSERT_TRUE(is_structurally_valid(*m, k));
      ASSERT_EQ(m->lines.size(), g.lines.size());
      std::vector<std::size_t> changed;
      for (std::size_t i = 0; i < g.lines.size(); ++i) {
        if (m->lines[i] != g.lines[i]) changed.push_back(i);
      }
      switch (kind) {
        case LineMutation::ExchangeWithin:
        case LineMutation::ReverseSubseries:
          ASSERT_LE(changed.size(), 1u);
          for (std::size_t i : changed) EXPECT_EQ(placements(m->lines[i]), placements(g.lines[i]));
          break;
        case LineMutation::ExchangeBetween:
          ASSERT_LE(changed.size(), 2u);
          for (std::size_t i = 0; i < g.lines.size(); ++i) EXPECT_EQ(m->lines[i].size(), g.lines[i].size());
          break;
        case LineMutation::Transfer: {
          ASSERT_EQ(changed.size(), 2u);
          const long d0 = long(m->lines[changed[0]].size()) - long(g.lines[changed[0]].size());
          const long d1 = long(m->lines[changed[1]].size()) - long(g.lines[changed[1]].size());
          EXPECT_EQ(std::abs(d0), 1);
          EXPECT_EQ(d0 + d1, 0);
          break;
        }
        case LineMutation::Removal:
          EXPECT_EQ(total_placements(*m) + 1, total_placements(g));
          break;
        case LineMutation::Addition:
          EXPECT_EQ(total_placements(*m), total_placements(g) + 1);
          break;
      }
    }
  }
}

TEST(Mutation, MutateLinesAlwaysReturnsValidLayout) {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 7;
    const LineGenome g = random_valid_genome(gen, k, 1 + trial % 3);
    Rng rng(gen());
    const LineGenome m = mutate_lines(g, k, rng);
    EXPECT_TRUE(is_structurally_valid(m, k));
    EXPECT_EQ(m.lines.size(), g.lines.size());
  }
}

TEST(Crossover, SwapsOneLine) {
  const LineGenome a{{{0, 1}, {1, 2}, {2, 3}}};
  const LineGenome b{{{3, 0}, {0, 2, 1}, {1, 3}}};
  const auto [c, d] = swap_line(a, b, 1);
  EXPECT_EQ(c, (LineGenome{{{0, 1}, {0, 2, 1}, {2, 3}}}));
  EXPECT_EQ(d, (LineGenome{{{3, 0}, {1, 2}, {1, 3}}}));
}

TEST(Crossover, IdenticalParentsAndSingleLine) {
  const LineGenome a{{{0, 1}, {1, 2}}};
  Rng rng(3);
  const auto [c, d] = crossover_lines(a, a, rng);
  EXPECT_EQ(c, a);
  EXPECT_EQ(d, a);
  const LineGenome x{{{0, 1, 2}}};
  const LineGenome y{{{2, 0, 1}}};
  Rng r2(4);
  const auto [p, q] = crossover_lines(x, y, r2);
  EXPECT_EQ(p, y);
  EXPECT_EQ(q, x);
}

TEST(Repair, ConnectedGenomeUnchanged) {
  std::mt19937_64 gen(61);
  const auto s = random_stations(gen, 6);
  const LineGenome g{{{0, 1, 2}, {2, 3, 4, 5}}};
  EXPECT_EQ(repair_lines(g, s), g);
}

TEST(Repair, BridgesTwoComponents) {
  const std::vector<PlanarPoint> s{{0, 0}, {1000, 0}, {2000, 0}, {3000, 0}};
  const LineGenome r = repair_lines(LineGenome{{{0, 1}, {2, 3}}}, s);
  EXPECT_TRUE(is_valid_layout(r, 4, 2));
  EXPECT_EQ(total_placements(r), 5u);
}

TEST(Repair, CoversMissingStation) {
  const std::vector<PlanarPoint> s{{0, 0}, {1000, 0}, {2000, 0}, {2100, 500}};
  const LineGenome r = repair_lines(LineGenome{{{0, 1, 2}}}, s);
  EXPECT_EQ(r, (LineGenome{{{0, 1, 2, 3}}}));
}

TEST(Repair, DropsRepeatsAndExtendsShortLines) {
  const std::vector<PlanarPoint> s{{0, 0}, {1000, 0}, {2000, 0}};
  const LineGenome r = repair_lines(LineGenome{{{0, 1, 0, 2}, {2}}}, s);
  EXPECT_TRUE(is_valid_layout(r, 3, 2));
  EXPECT_EQ(r.lines[0], (Line{0, 1, 2}));
  EXPECT_EQ(r.lines[1].size(), 2u);
}

TEST(Repair, IdempotentAndAlwaysConnects) {
  std::mt19937_64 gen(67);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + gen() % 9;
    const std::size_t nl = 1 + gen() % 4;
    const auto s = random_stations(gen, k);
    LineGenome g;
    for (std::size_t i = 0; i < nl; ++i) {
      Line l;
      const std::size_t len = gen() % 5;
      for (std::size_t j = 0; j < len; ++j) l.push_back(gen() % (k + 1));
      g.lines.push_back(l);
    }
    const LineGenome r = repair_lines(g, s);
    ASSERT_TRUE(is_valid_layout(r, k, nl));
    ASSERT_EQ(repair_lines(r, s), r);
  }
}

TEST(Repair, FailsWithoutStationsOrLines) {
  const std::vector<PlanarPoint> one{{0, 0}};
  EXPECT_THROW(repair_lines(LineGenome{{{0}}}, one), MetroError);
  const std::vector<PlanarPoint> two{{0, 0}, {1, 0}};
  EXPECT_THROW(repair_lines(LineGenome{}, two), MetroError);
}

TEST(InitLines, ForcedTwoStationLayout) {
  const std::vector<PlanarPoint> s{{0, 0}, {500, 0}};
  Rng rng(1);
  for (const LineGenome& g : init_lines(s, 1, 10, rng)) EXPECT_EQ(canonical(g), (LineGenome{{{0, 1}}}));
}

TEST(InitLines, MoreLinesThanPairs) {
  std::mt19937_64 gen(71);
  const auto s = random_stations(gen, 5);
  Rng rng(2);
  const auto pop = init_lines(s, 5, 50, rng);
  ASSERT_EQ(pop.size(), 50u);
  for (const LineGenome& g : pop) EXPECT_TRUE(is_valid_layout(g, 5, 5));
}

TEST(InitLines, ReproducibleAndRejectsTinyInputs) {
  std::mt19937_64 gen(73);
  const auto s = random_stations(gen, 9);
  Rng a(5);
  Rng b(5);
  EXPECT_EQ(init_lines(s, 3, 20, a), init_lines(s, 3, 20, b));
  const std::vector<PlanarPoint> one{{0, 0}};
  Rng c(1);
  try {
    init_lines(one, 1, 5, c);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewStations);
  }
}

TEST(Canonical, OrientsBySmallerEndpoint) {
  EXPECT_EQ(canonical(LineGenome{{{3, 1, 0}, {0, 2}}}), (LineGenome{{{0, 1, 3}, {0, 2}}}));
}

LineStageConfig line_config(std::size_t lines, std::size_t pop, std::size_t gens, std::uint64_t seed) {
  LineStageConfig c;
  c.line_count = lines;
  c.ga.population_size = pop;
  c.ga.generations = gens;
  c.ga.rng_seed = seed;
  c.ga.sense = Sense::Minimize;
  c.ga.threads = 1;
  return c;
}

TEST(OptimizeLines, TwoStationsExact) {
  const std::vector<PlanarPoint> s{{0, 0}, {300, 400}};
  const std::vector<double> serviced{10, 30};
  const auto r = optimize_lines(s, serviced, line_config(1, 10, 5, 1));
  EXPECT_DOUBLE_EQ(r.fitness.value, 500.0 * 40.0);
  EXPECT_EQ(canonical(r.best), (LineGenome{{{0, 1}}}));
}

TEST(OptimizeLines, FiveStationsSingleLineFindsExhaustiveOptimum) {
  std::mt19937_64 gen(79);
  const auto s = random_stations(gen, 5);
  const auto serviced = random_serviced(gen, 5);
  std::size_t orderings = 0;
  const double best = testing::best_single_line(s, serviced, &orderings);
  EXPECT_EQ(orderings, 60u);
  const auto r = optimize_lines(s, serviced, line_config(1, 40, 200, 42));
  EXPECT_LT(testing::relative_error(r.fitness.value, best), 1e-9);
}

TEST(OptimizeLines, SixStationsTwoLinesNearExhaustive) {
  std::mt19937_64 gen(83);
  const auto s = random_stations(gen, 6);
  const auto serviced = random_serviced(gen, 6);
  const double best = testing::best_two_lines(s, serviced);
  const auto r = optimize_lines(s, serviced, line_config(2, 40, 100, 42));
  EXPECT_TRUE(r.fitness.feasible);
  EXPECT_LE(r.fitness.value, 1.05 * best);
}

TEST(OptimizeLines, HistoryAndPopulationInvariants) {
  std::mt19937_64 gen(89);
  const auto s = random_stations(gen, 10);
  const auto serviced = random_serviced(gen, 10);
  bool ok = true;
  const auto r = optimize_lines(s, serviced, line_config(3, 20, 30, 8),
                                [&](std::size_t, std::span<const LineGenome> pop) {
                                  ok = ok && pop.size() == 20;
                                  for (const auto& g : pop) ok = ok && is_valid_layout(g, 10, 3);
                                });
  EXPECT_TRUE(ok);
  for (std::size_t t = 1; t < r.history.records.size(); ++t) {
    EXPECT_LE(r.history.records[t].best_fitness, r.history.records[t - 1].best_fitness);
  }
  EXPECT_LT(testing::relative_error(r.fitness.value, line_fitness_oracle(r.best.lines, s, serviced)), 1e-9);
}

}  // namespace
}  // namespace metro
