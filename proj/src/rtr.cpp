#include "mboa/rtr.hpp"

#include <cmath>
#include <string>

#include "mboa/error.hpp"

namespace mboa {

int hamming(const Individual& a, const Individual& b) {
  if (a.genes.size() != b.genes.size()) {
    throw DimensionError("hamming distance between lengths " + std::to_string(a.genes.size()) +
                         " and " + std::to_string(b.genes.size()));
  }
  int distance = 0;
  for (std::size_t i = 0; i < a.genes.size(); ++i) distance += a.genes[i] != b.genes[i];
  return distance;
}

int rtr_window(double fraction, int population_size) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw PreconditionError("RTR window fraction must lie in (0, 1]");
  }
  return std::max(1, static_cast<int>(std::lround(fraction * population_size)));
}

int rtr_offer(Population& target, const Individual& candidate, std::span<const int> window) {
  if (window.empty()) return -1;
  if (!candidate.evaluated) throw PreconditionError("offspring has no valid fitness");
  int nearest = window.front();
  int nearest_distance = hamming(target[nearest], candidate);
  for (int index : window.subspan(1)) {
    const int d = hamming(target[index], candidate);
    if (d < nearest_distance) {
      nearest = index;
      nearest_distance = d;
    }
  }
  Individual& incumbent = target[nearest];
  if (!incumbent.evaluated) throw PreconditionError("target member has no valid fitness");
  if (candidate.fitness > incumbent.fitness) {
    incumbent = candidate;
    return nearest;
  }
  return -1;
}

int rtr_replace(Population& target, const Population& offspring, double fraction, Rng& rng) {
  const int window_size = rtr_window(fraction, target.size());
  if (offspring.empty()) return 0;
  if (target.empty()) throw PreconditionError("RTR into an empty population");
  if (offspring.length() != target.length()) {
    throw DimensionError("offspring length differs from target length");
  }
  std::uniform_int_distribution<int> pick(0, target.size() - 1);
  std::vector<int> window(static_cast<std::size_t>(window_size));
  int replaced = 0;
  for (const Individual& child : offspring) {
    for (int& index : window) index = pick(rng);
    replaced += rtr_offer(target, child, window) >= 0;
  }
  return replaced;
}

}  // namespace mboa
