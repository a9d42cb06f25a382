#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mboa/genome.hpp"
#include "mboa/types.hpp"

namespace mboa {

class WorkerPool;

/// Gene-major copy of a population: column g holds gene g of every member.
using GeneMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

GeneMatrix to_gene_matrix(const Population& pop);

/// Node of a decision tree stored in preorder. A leaf has split_gene < 0.
/// Split nodes keep the counts of the population view they partitioned.
struct TreeNode {
  int split_gene = -1;
  int child0 = -1;
  int child1 = -1;
  int count0 = 0;
  int count1 = 0;
  double p1 = 0.5;

  bool is_leaf() const noexcept { return split_gene < 0; }
};

/// Conditional distribution p(gene | parents) as a binary decision tree.
/// Root is node 0; the subtree for value 0 of a split directly follows it.
class DecisionTree {
 public:
  /// Leaf with the Laplace estimate (count1 + 1) / (count0 + count1 + 2).
  static DecisionTree leaf(int count0, int count1);
  /// Leaf with an explicit probability of emitting 1; counts are zero.
  static DecisionTree leaf_with_probability(double p1);
  static DecisionTree split(int gene, const DecisionTree& zero, const DecisionTree& one);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const TreeNode& root() const { return nodes_.front(); }

  /// Longest root-to-leaf path, counted in edges.
  int height() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&);

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
};

/// One decision tree per gene plus the gene permutation that constrains
/// which genes may appear as splits.
struct Model {
  std::vector<int> ordering;
  std::vector<DecisionTree> trees;  // indexed by target gene
  int population_size = 0;

  int length() const noexcept { return static_cast<int>(trees.size()); }
  friend bool operator==(const Model&, const Model&) = default;
};

/// ln Gamma(k + 1) for k = 0 .. max.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int max);
  double operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }
  int max() const noexcept { return static_cast<int>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

/// K2 marginal likelihood of a leaf with the given value counts under a
/// uniform Dirichlet(1, 1) prior, natural log:
///   lnG(1 + c0) + lnG(1 + c1) - lnG(2 + c0 + c1).
double bde_leaf_score(int count0, int count1);
double bde_leaf_score(int count0, int count1, const LogFactorialTable& lf);

/// Score gain of splitting the view's `target` values on `candidate`.
double split_gain(const GeneMatrix& data, std::span<const int> view, int target, int candidate);

/// Greedy recursive tree construction. A split is taken when the best
/// candidate's gain exceeds `penalty`; candidates are tried in ascending gene
/// order and only a strictly larger gain replaces the current best.
DecisionTree build_tree(const GeneMatrix& data, std::span<const int> view, int target,
                        std::span<const int> candidates, double penalty);

/// Penalty applied per added split when building from N individuals.
double split_penalty(int population_size);

/// Builds every gene's tree with candidates restricted to the genes that
/// precede it in `ordering`. Trees are built concurrently on `pool`; the
/// result does not depend on the worker count.
Model build_model(const Population& parents, std::vector<int> ordering, WorkerPool& pool);

/// As above with a fresh uniformly random ordering drawn from `rng`.
Model build_model(const Population& parents, Rng& rng, WorkerPool& pool);

std::vector<int> random_ordering(int length, Rng& rng);

/// Mean over trees of tree height.
double measure_height(const Model& model);

/// Throws Error if the ordering is not a permutation, a tree splits on a gene
/// that does not precede its target, or a gene repeats along a path.
void check_model(const Model& model);

// Text format: the ordering on one line, then each gene's tree in preorder,
// one node per line as `S <gene>` or `L <count0> <count1>`. Leaf
// probabilities are restored with the Laplace estimate.
void write_model(std::ostream& out, const Model& model);
std::string to_string(const Model& model);
Model read_model(std::istream& in);

}  // namespace mboa
