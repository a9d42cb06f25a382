#include "mboa/sampler.hpp"

#include <stdexcept>
#include <string>

#include "mboa/error.hpp"

namespace mboa {

Individual sample_individual(const Model& model, Rng& rng) {
  const int n = model.length();
  BitVector genes(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> drawn(static_cast<std::size_t>(n), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int gene : model.ordering) {
    const DecisionTree& tree = model.trees[static_cast<std::size_t>(gene)];
    const TreeNode* node = &tree.root();
    while (!node->is_leaf()) {
      const auto split = static_cast<std::size_t>(node->split_gene);
      if (split >= drawn.size() || !drawn[split]) {
        throw std::logic_error("tree of gene " + std::to_string(gene) + " splits on ungenerated gene " +
                               std::to_string(node->split_gene));
      }
      node = &tree.node(genes[split] ? node->child1 : node->child0);
    }
    genes[static_cast<std::size_t>(gene)] = unit(rng) < node->p1 ? 1 : 0;
    drawn[static_cast<std::size_t>(gene)] = 1;
  }
  return Individual(std::move(genes));
}

Population sample_population(const Model& model, int count, Rng& rng) {
  if (count < 1) throw PreconditionError("sample count must be positive");
  Population pop(model.length());
  for (int k = 0; k < count; ++k) pop.push_back(sample_individual(model, rng));
  return pop;
}

int traversal_depth(const Model& model, const Individual& ind) {
  int depth = 0;
  for (const DecisionTree& tree : model.trees) {
    const TreeNode* node = &tree.root();
    while (!node->is_leaf()) {
      ++depth;
      node = &tree.node(ind.genes[static_cast<std::size_t>(node->split_gene)] ? node->child1
                                                                                : node->child0);
    }
  }
  return depth;
}

}  // namespace mboa
