#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mboa/types.hpp"

namespace mboa {

struct Individual {
  BitVector genes;
  double fitness = 0.0;
  bool evaluated = false;

  Individual() = default;
  explicit Individual(BitVector g) : genes(std::move(g)) {}
  Individual(BitVector g, double f) : genes(std::move(g)), fitness(f), evaluated(true) {}

  int length() const noexcept { return static_cast<int>(genes.size()); }
};

/// Ordered collection of individuals sharing one genome length.
class Population {
 public:
  Population() = default;
  explicit Population(int length) : length_(length) {}
  /// Throws DimensionError if the members' lengths disagree.
  Population(int length, std::vector<Individual> members);

  int length() const noexcept { return length_; }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  bool empty() const noexcept { return members_.empty(); }

  const Individual& operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }
  Individual& operator[](int i) { return members_[static_cast<std::size_t>(i)]; }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  auto begin() { return members_.begin(); }
  auto end() { return members_.end(); }

  /// Throws DimensionError on length mismatch.
  void push_back(Individual ind);
  /// Keeps the first `count` members; grows with empty individuals of the
  /// population's length.
  void resize(int count);

  const std::vector<Individual>& members() const noexcept { return members_; }

  /// Index of the fittest evaluated member (first on ties).
  int best_index() const;
  double mean_fitness() const;
  /// True when every member carries identical genes.
  bool converged() const;

  friend bool operator==(const Population& a, const Population& b);

 private:
  int length_ = 0;
  std::vector<Individual> members_;
};

/// Uniform random population of `count` unevaluated individuals.
Population random_population(int length, int count, Rng& rng);

/// Binary tournaments with replacement: each winner is the fitter of two
/// uniformly drawn members, the first drawn on ties.
Population tournament_select(const Population& pop, int count, Rng& rng);

/// As above, writing the winners into `out` and reusing its storage.
void tournament_select(const Population& pop, int count, Rng& rng, Population& out);

/// Tournament selection over explicit index pairs.
Population tournament_select(const Population& pop, std::span<const std::pair<int, int>> pairs);

}  // namespace mboa
