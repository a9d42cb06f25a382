#include "mboa/treemodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mboa/error.hpp"
#include "mboa/worker_pool.hpp"

namespace mboa {
namespace {

double laplace(int count0, int count1) {
  return (count1 + 1.0) / (count0 + count1 + 2.0);
}

void check_counts(int count0, int count1) {
  if (count0 < 0 || count1 < 0) {
    throw PreconditionError("leaf counts must be non-negative, got (" + std::to_string(count0) +
                            ", " + std::to_string(count1) + ")");
  }
}

}  // namespace

GeneMatrix to_gene_matrix(const Population& pop) {
  GeneMatrix data(pop.size(), pop.length());
  for (int r = 0; r < pop.size(); ++r) {
    const BitVector& genes = pop[r].genes;
    for (int g = 0; g < pop.length(); ++g) data(r, g) = genes[static_cast<std::size_t>(g)];
  }
  return data;
}

DecisionTree DecisionTree::leaf(int count0, int count1) {
  check_counts(count0, count1);
  DecisionTree tree;
  tree.nodes_.push_back({-1, -1, -1, count0, count1, laplace(count0, count1)});
  return tree;
}

DecisionTree DecisionTree::leaf_with_probability(double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw PreconditionError("leaf probability outside [0, 1]");
  DecisionTree tree;
  tree.nodes_.push_back({-1, -1, -1, 0, 0, p1});
  return tree;
}

DecisionTree DecisionTree::split(int gene, const DecisionTree& zero, const DecisionTree& one) {
  if (gene < 0) throw PreconditionError("split gene must be non-negative");
  DecisionTree tree;
  TreeNode root;
  root.split_gene = gene;
  root.count0 = zero.root().count0 + one.root().count0;
  root.count1 = zero.root().count1 + one.root().count1;
  root.p1 = laplace(root.count0, root.count1);
  tree.nodes_.push_back(root);
  const auto append = [&tree](const DecisionTree& sub) {
    const int offset = static_cast<int>(tree.nodes_.size());
    for (TreeNode n : sub.nodes_) {
      if (!n.is_leaf()) {
        n.child0 += offset;
        n.child1 += offset;
      }
      tree.nodes_.push_back(n);
    }
    return offset;
  };
  tree.nodes_[0].child0 = append(zero);
  tree.nodes_[0].child1 = append(one);
  return tree;
}

int DecisionTree::height() const {
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [index, depth] = stack.back();
    stack.pop_back();
    const TreeNode& n = node(index);
    if (n.is_leaf()) {
      best = std::max(best, depth);
    } else {
      stack.emplace_back(n.child0, depth + 1);
      stack.emplace_back(n.child1, depth + 1);
    }
  }
  return best;
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  return std::equal(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                    [](const TreeNode& x, const TreeNode& y) {
                      return x.split_gene == y.split_gene && x.child0 == y.child0 &&
                             x.child1 == y.child1 && x.count0 == y.count0 &&
                             x.count1 == y.count1 && x.p1 == y.p1;
                    });
}

LogFactorialTable::LogFactorialTable(int max) : table_(static_cast<std::size_t>(max) + 1) {
  for (int k = 0; k <= max; ++k) table_[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
}

double bde_leaf_score(int count0, int count1) {
  check_counts(count0, count1);
  return std::lgamma(1.0 + count0) + std::lgamma(1.0 + count1) -
         std::lgamma(2.0 + count0 + count1);
}

double bde_leaf_score(int count0, int count1, const LogFactorialTable& lf) {
  return lf(count0) + lf(count1) - lf(count0 + count1 + 1);
}

double split_gain(const GeneMatrix& data, std::span<const int> view, int target, int candidate) {
  if (candidate == target) throw PreconditionError("split candidate equals the target gene");
  if (view.empty()) throw PreconditionError("split gain over an empty population view");
  int counts[2][2] = {{0, 0}, {0, 0}};  // [candidate][target]
  for (int row : view) ++counts[data(row, candidate)][data(row, target)];
  const int total0 = counts[0][0] + counts[1][0];
  const int total1 = counts[0][1] + counts[1][1];
  return bde_leaf_score(counts[0][0], counts[0][1]) + bde_leaf_score(counts[1][0], counts[1][1]) -
         bde_leaf_score(total0, total1);
}

double split_penalty(int population_size) {
  return 0.5 * std::log(static_cast<double>(population_size));
}

/// Recursive BuildTree over one target gene. Frequency tables are rebuilt
/// from each node's population view.
class TreeBuilder {
 public:
  TreeBuilder(const GeneMatrix& data, int target, double penalty, const LogFactorialTable& lf)
      : data_(data), target_(target), penalty_(penalty), lf_(lf) {}

  DecisionTree build(std::span<const int> view, std::vector<int> candidates) {
    DecisionTree tree;
    grow(tree.nodes_, view, std::move(candidates));
    return tree;
  }

 private:
  void grow(std::vector<TreeNode>& nodes, std::span<const int> view, std::vector<int> candidates) {
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();

    const std::uint8_t* target_col = data_.col(target_).data();
    std::vector<std::uint8_t> target_values(view.size());
    int ones = 0;
    for (std::size_t k = 0; k < view.size(); ++k) {
      target_values[k] = target_col[view[k]];
      ones += target_values[k];
    }
    const int size = static_cast<int>(view.size());
    const int zeros = size - ones;
    nodes[index].count0 = zeros;
    nodes[index].count1 = ones;
    nodes[index].p1 = laplace(zeros, ones);
    if (view.empty() || candidates.empty()) return;

    const double base = bde_leaf_score(zeros, ones, lf_);
    double best_gain = -std::numeric_limits<double>::infinity();
    int best = -1;
    for (int candidate : candidates) {
      const std::uint8_t* col = data_.col(candidate).data();
      int cand_ones = 0;
      int both = 0;
      for (std::size_t k = 0; k < view.size(); ++k) {
        const int c = col[view[k]];
        cand_ones += c;
        both += c & target_values[k];
      }
      const int n10 = cand_ones - both;   // candidate 1, target 0
      const int n01 = ones - both;        // candidate 0, target 1
      const int n00 = zeros - n10;        // candidate 0, target 0
      const double gain =
          bde_leaf_score(n00, n01, lf_) + bde_leaf_score(n10, both, lf_) - base;
      if (gain > best_gain) {
        best_gain = gain;
        best = candidate;
      }
    }
    if (!(best_gain > penalty_)) return;

    std::vector<int> zero_view;
    std::vector<int> one_view;
    zero_view.reserve(view.size());
    one_view.reserve(view.size());
    const std::uint8_t* split_col = data_.col(best).data();
    for (int row : view) (split_col[row] ? one_view : zero_view).push_back(row);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));

    nodes[index].split_gene = best;
    nodes[index].child0 = static_cast<int>(nodes.size());
    grow(nodes, zero_view, candidates);
    nodes[index].child1 = static_cast<int>(nodes.size());
    grow(nodes, one_view, std::move(candidates));
  }

  const GeneMatrix& data_;
  int target_;
  double penalty_;
  const LogFactorialTable& lf_;
};

DecisionTree build_tree(const GeneMatrix& data, std::span<const int> view, int target,
                        std::span<const int> candidates, double penalty) {
  std::vector<int> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::find(sorted.begin(), sorted.end(), target) != sorted.end()) {
    throw PreconditionError("target gene listed among its own split candidates");
  }
  LogFactorialTable lf(static_cast<int>(view.size()) + 1);
  return TreeBuilder(data, target, penalty, lf).build(view, std::move(sorted));
}

std::vector<int> random_ordering(int length, Rng& rng) {
  std::vector<int> ordering(static_cast<std::size_t>(length));
  std::iota(ordering.begin(), ordering.end(), 0);
  std::shuffle(ordering.begin(), ordering.end(), rng);
  return ordering;
}

Model build_model(const Population& parents, std::vector<int> ordering, WorkerPool& pool) {
  if (parents.size() < 2) throw PreconditionError("model building needs at least 2 parents");
  const int n = parents.length();
  if (static_cast<int>(ordering.size()) != n) {
    throw DimensionError("ordering length does not match genome length");
  }
  const GeneMatrix data = to_gene_matrix(parents);
  std::vector<int> all_rows(static_cast<std::size_t>(parents.size()));
  std::iota(all_rows.begin(), all_rows.end(), 0);
  const LogFactorialTable lf(parents.size() + 1);
  const double penalty = split_penalty(parents.size());

  Model model;
  model.population_size = parents.size();
  model.trees.resize(static_cast<std::size_t>(n));
  // Later positions have more candidates; hand them out first.
  pool.parallel_for(n, [&](int task) {
    const int position = n - 1 - task;
    const int target = ordering[static_cast<std::size_t>(position)];
    std::vector<int> candidates(ordering.begin(), ordering.begin() + position);
    std::sort(candidates.begin(), candidates.end());
    model.trees[static_cast<std::size_t>(target)] =
        TreeBuilder(data, target, penalty, lf).build(all_rows, std::move(candidates));
  });
  model.ordering = std::move(ordering);
  return model;
}

Model build_model(const Population& parents, Rng& rng, WorkerPool& pool) {
  return build_model(parents, random_ordering(parents.length(), rng), pool);
}

double measure_height(const Model& model) {
  if (model.trees.empty()) return 0.0;
  double total = 0.0;
  for (const DecisionTree& tree : model.trees) total += tree.height();
  return total / static_cast<double>(model.trees.size());
}

void check_model(const Model& model) {
  const int n = model.length();
  if (static_cast<int>(model.ordering.size()) != n) {
    throw Error("ordering length differs from tree count");
  }
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    const int gene = model.ordering[static_cast<std::size_t>(k)];
    if (gene < 0 || gene >= n || position[static_cast<std::size_t>(gene)] >= 0) {
      throw Error("ordering is not a permutation");
    }
    position[static_cast<std::size_t>(gene)] = k;
  }
  for (int target = 0; target < n; ++target) {
    const DecisionTree& tree = model.trees[static_cast<std::size_t>(target)];
    // (node, genes used on the path so far)
    std::vector<std::pair<int, std::vector<int>>> stack{{0, {}}};
    while (!stack.empty()) {
      auto [index, path] = std::move(stack.back());
      stack.pop_back();
      const TreeNode& node = tree.node(index);
      if (node.is_leaf()) continue;
      const int gene = node.split_gene;
      if (gene >= n || position[static_cast<std::size_t>(gene)] >=
                           position[static_cast<std::size_t>(target)]) {
        throw Error("tree of gene " + std::to_string(target) + " splits on gene " +
                    std::to_string(gene) + " which does not precede it");
      }
      if (std::find(path.begin(), path.end(), gene) != path.end()) {
        throw Error("gene " + std::to_string(gene) + " repeats on a path of tree " +
                    std::to_string(target));
      }
      path.push_back(gene);
      stack.emplace_back(node.child0, path);
      stack.emplace_back(node.child1, std::move(path));
    }
  }
}

void write_model(std::ostream& out, const Model& model) {
  for (std::size_t k = 0; k < model.ordering.size(); ++k) {
    if (k) out << ' ';
    out << model.ordering[k];
  }
  out << '\n';
  for (const DecisionTree& tree : model.trees) {
    for (const TreeNode& node : tree.nodes()) {
      if (node.is_leaf()) {
        out << "L " << node.count0 << ' ' << node.count1 << '\n';
      } else {
        out << "S " << node.split_gene << '\n';
      }
    }
  }
}

std::string to_string(const Model& model) {
  std::ostringstream out;
  write_model(out, model);
  return out.str();
}

namespace {

DecisionTree read_tree(std::istream& in, int& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("unexpected end of model", line_no + 1);
  ++line_no;
  std::istringstream fields(line);
  std::string tag, extra;
  fields >> tag;
  if (tag == "L") {
    int count0 = -1, count1 = -1;
    if (!(fields >> count0 >> count1) || (fields >> extra) || count0 < 0 || count1 < 0) {
      throw ParseError("expected 'L <count0> <count1>'", line_no);
    }
    return DecisionTree::leaf(count0, count1);
  }
  if (tag == "S") {
    int gene = -1;
    if (!(fields >> gene) || (fields >> extra) || gene < 0) {
      throw ParseError("expected 'S <gene>'", line_no);
    }
    DecisionTree zero = read_tree(in, line_no);
    DecisionTree one = read_tree(in, line_no);
    return DecisionTree::split(gene, zero, one);
  }
  throw ParseError("unknown node tag '" + tag + "'", line_no);
}

}  // namespace

Model read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model", 1);
  int line_no = 1;
  Model model;
  std::istringstream header(line);
  for (int gene; header >> gene;) model.ordering.push_back(gene);
  if (!header.eof()) throw ParseError("malformed ordering line", 1);
  for (std::size_t k = 0; k < model.ordering.size(); ++k) {
    model.trees.push_back(read_tree(in, line_no));
  }
  if (!model.trees.empty()) {
    int total = 0;
    for (const TreeNode& node : model.trees.front().nodes()) {
      if (node.is_leaf()) total += node.count0 + node.count1;
    }
    model.population_size = total;
  }
  try {
    check_model(model);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
  return model;
}

}  // namespace mboa
