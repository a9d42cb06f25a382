#include <doctest.h>

#include <cmath>
#include <utility>

#include "mboa/error.hpp"
#include "mboa/genome.hpp"
#include "test_support.hpp"

using namespace mboa;

namespace {

Population with_fitness(std::initializer_list<double> values, int length = 4) {
  Population pop(length);
  int k = 0;
  for (double f : values) pop.push_back(Individual(testing::bits_of(k++, length), f));
  return pop;
}

Population random_evaluated(int length, int count, Rng& rng) {
  Population pop = random_population(length, count, rng);
  std::uniform_real_distribution<double> f(-10.0, 10.0);
  for (Individual& ind : pop) {
    ind.fitness = f(rng);
    ind.evaluated = true;
  }
  return pop;
}

}  // namespace

TEST_SUITE("genome") {

TEST_CASE("tournament winners over forced pairs") {
  const Population pop = with_fitness({1, 2, 3, 4});
  const std::vector<std::pair<int, int>> pairs{{0, 3}, {1, 2}, {2, 3}, {0, 1}};
  const Population winners = tournament_select(pop, pairs);
  REQUIRE(winners.size() == 4);
  CHECK(winners[0].fitness == 4);
  CHECK(winners[1].fitness == 3);
  CHECK(winners[2].fitness == 4);
  CHECK(winners[3].fitness == 2);
  CHECK(winners[0].genes == pop[3].genes);
}

TEST_CASE("ties go to the first drawn member") {
  Population pop(2);
  pop.push_back(Individual({0, 0}, 1.0));
  pop.push_back(Individual({1, 1}, 1.0));
  const std::vector<std::pair<int, int>> pairs{{1, 0}, {0, 1}};
  const Population winners = tournament_select(pop, pairs);
  CHECK(winners[0].genes == BitVector{1, 1});
  CHECK(winners[1].genes == BitVector{0, 0});
}

TEST_CASE("clones select clones") {
  Population pop(3);
  for (int i = 0; i < 10; ++i) pop.push_back(Individual({1, 0, 1}, 2.5));
  Rng rng(1);
  for (const Individual& ind : tournament_select(pop, 25, rng)) {
    CHECK(ind.genes == BitVector{1, 0, 1});
    CHECK(ind.fitness == 2.5);
  }
}

TEST_CASE("copies of a unique best follow the pair-draw binomial") {
  // The best wins whenever it is drawn: p = 1 - (1 - 1/N)^2 per tournament.
  const int N = 1000;
  const int runs = 30;
  Rng fill(3);
  Population pop(8);
  for (int i = 0; i < N; ++i) pop.push_back(Individual(testing::random_bits(8, fill), i < N - 1 ? 0.0 : 1.0));
  int copies = 0;
  for (int run = 0; run < runs; ++run) {
    Rng rng(100 + run);
    for (const Individual& ind : tournament_select(pop, N, rng)) copies += ind.fitness == 1.0;
  }
  const double p = 1.0 - std::pow(1.0 - 1.0 / N, 2);
  const double trials = static_cast<double>(runs) * N;
  const double mean = trials * p;
  const double sigma = std::sqrt(trials * p * (1.0 - p));
  CHECK(std::abs(copies - mean) <= 4.0 * sigma);
}

TEST_CASE("selection preconditions") {
  Rng rng(1);
  CHECK_THROWS_AS(tournament_select(Population(4), 3, rng), PreconditionError);
  CHECK_THROWS_AS(tournament_select(with_fitness({1}), 3, rng), PreconditionError);
  CHECK_THROWS_AS(tournament_select(with_fitness({1, 2}), 0, rng), PreconditionError);
  Population unevaluated(2);
  unevaluated.push_back(Individual({0, 1}));
  unevaluated.push_back(Individual({1, 1}));
  CHECK_THROWS_AS(tournament_select(unevaluated, 2, rng), PreconditionError);
}

TEST_CASE("population rejects mixed lengths") {
  Population pop(3);
  CHECK_THROWS_AS(pop.push_back(Individual({0, 1})), DimensionError);
  CHECK_THROWS_AS(Population(3, {Individual({0, 1, 1}), Individual({1})}), DimensionError);
}

TEST_CASE("selection properties over random populations") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng fill(seed);
    const Population pop = random_evaluated(12, 40, fill);

    Rng rng(seed + 1000);
    Rng replay = rng;
    const Population selected = tournament_select(pop, 40, rng);

    // Replay the pair draws to compare winners with the drawn pairs.
    std::uniform_int_distribution<int> pick(0, pop.size() - 1);
    double winners = 0.0;
    double drawn = 0.0;
    for (int t = 0; t < 40; ++t) {
      const int a = pick(replay);
      const int b = pick(replay);
      drawn += pop[a].fitness + pop[b].fitness;
      winners += selected[t].fitness;
      CHECK(selected[t].fitness == std::max(pop[a].fitness, pop[b].fitness));
    }
    CHECK(winners / 40 >= drawn / 80);

    for (const Individual& ind : selected) {
      bool found = false;
      for (const Individual& member : pop) found = found || member.genes == ind.genes;
      CHECK(found);
    }

    Rng again(seed + 1000);
    CHECK(tournament_select(pop, 40, again) == selected);
  }
}

TEST_CASE("convergence and best member") {
  Population pop(2);
  pop.push_back(Individual({0, 1}, 3.0));
  pop.push_back(Individual({0, 1}, 3.0));
  CHECK(pop.converged());
  pop.push_back(Individual({1, 1}, 5.0));
  CHECK_FALSE(pop.converged());
  CHECK(pop.best_index() == 2);
  CHECK(pop.mean_fitness() == doctest::Approx(11.0 / 3.0));
}

}  // TEST_SUITE
