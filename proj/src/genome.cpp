#include "mboa/genome.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mboa/error.hpp"

namespace mboa {
namespace {

void require_evaluated(const Individual& ind) {
  if (!ind.evaluated) throw PreconditionError("individual has no valid fitness");
}

const Individual& winner(const Population& pop, int first, int second) {
  const Individual& a = pop[first];
  const Individual& b = pop[second];
  require_evaluated(a);
  require_evaluated(b);
  return b.fitness > a.fitness ? b : a;
}

}  // namespace

Population::Population(int length, std::vector<Individual> members) : length_(length) {
  for (const Individual& ind : members) {
    if (ind.length() != length_) {
      throw DimensionError("individual of length " + std::to_string(ind.length()) +
                           " in population of length " + std::to_string(length_));
    }
  }
  members_ = std::move(members);
}

void Population::push_back(Individual ind) {
  if (ind.length() != length_) {
    throw DimensionError("individual of length " + std::to_string(ind.length()) +
                         " in population of length " + std::to_string(length_));
  }
  members_.push_back(std::move(ind));
}

void Population::resize(int count) {
  members_.resize(static_cast<std::size_t>(count),
                  Individual(BitVector(static_cast<std::size_t>(length_), 0)));
}

int Population::best_index() const {
  if (members_.empty()) throw PreconditionError("empty population has no best member");
  int best = 0;
  for (int i = 0; i < size(); ++i) {
    require_evaluated(members_[i]);
    if (members_[i].fitness > members_[best].fitness) best = i;
  }
  return best;
}

double Population::mean_fitness() const {
  if (members_.empty()) throw PreconditionError("empty population has no mean fitness");
  double sum = 0.0;
  for (const Individual& ind : members_) {
    require_evaluated(ind);
    sum += ind.fitness;
  }
  return sum / size();
}

bool Population::converged() const {
  return std::all_of(members_.begin(), members_.end(),
                     [&](const Individual& ind) { return ind.genes == members_.front().genes; });
}

bool operator==(const Population& a, const Population& b) {
  if (a.length_ != b.length_ || a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    const Individual& x = a[i];
    const Individual& y = b[i];
    if (x.genes != y.genes || x.evaluated != y.evaluated) return false;
    if (x.evaluated && x.fitness != y.fitness) return false;
  }
  return true;
}

Population random_population(int length, int count, Rng& rng) {
  Population pop(length);
  for (int k = 0; k < count; ++k) {
    BitVector genes(static_cast<std::size_t>(length));
    for (auto& g : genes) g = static_cast<std::uint8_t>(rng() >> 63);
    pop.push_back(Individual(std::move(genes)));
  }
  return pop;
}

Population tournament_select(const Population& pop, int count, Rng& rng) {
  Population selected(pop.length());
  tournament_select(pop, count, rng, selected);
  return selected;
}

void tournament_select(const Population& pop, int count, Rng& rng, Population& out) {
  if (pop.empty()) throw PreconditionError("tournament selection on an empty population");
  if (pop.size() < 2) throw PreconditionError("tournament selection needs at least 2 members");
  if (count < 1) throw PreconditionError("tournament count must be positive");
  if (out.length() != pop.length()) out = Population(pop.length());
  out.resize(count);
  std::uniform_int_distribution<int> pick(0, pop.size() - 1);
  for (int t = 0; t < count; ++t) {
    const int first = pick(rng);
    const int second = pick(rng);
    const Individual& w = winner(pop, first, second);
    Individual& slot = out[t];
    slot.genes.assign(w.genes.begin(), w.genes.end());
    slot.fitness = w.fitness;
    slot.evaluated = w.evaluated;
  }
}

Population tournament_select(const Population& pop, std::span<const std::pair<int, int>> pairs) {
  if (pop.empty()) throw PreconditionError("tournament selection on an empty population");
  Population selected(pop.length());
  for (auto [first, second] : pairs) {
    if (first < 0 || second < 0 || first >= pop.size() || second >= pop.size()) {
      throw PreconditionError("tournament index out of range");
    }
    selected.push_back(winner(pop, first, second));
  }
  return selected;
}

}  // namespace mboa
