#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

#include "mboa/error.hpp"
#include "mboa/sampler.hpp"
#include "mboa/treemodel.hpp"
#include "test_support.hpp"

using namespace mboa;

namespace {

Model leaves_only(int n, double p1) {
  Model model;
  for (int g = 0; g < n; ++g) {
    model.ordering.push_back(g);
    model.trees.push_back(DecisionTree::leaf_with_probability(p1));
  }
  return model;
}

// p-value of a chi-square goodness-of-fit test of `observed` counts against
// the exact marginal of `genes` under the model's product form.
double subset_p_value(const Model& model, const std::vector<int>& genes,
                      const std::vector<double>& observed, double total) {
  const int n = model.length();
  std::vector<double> expected(observed.size(), 0.0);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    const BitVector x = testing::bits_of(v, n);
    std::size_t cell = 0;
    for (std::size_t k = 0; k < genes.size(); ++k) cell |= std::size_t{x[genes[k]]} << k;
    expected[cell] += testing::model_probability(model, x);
  }
  double statistic = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = expected[c] * total;
    statistic += (observed[c] - e) * (observed[c] - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("certain leaves emit ones") {
  Rng rng(1);
  const Individual ind = sample_individual(leaves_only(10, 1.0), rng);
  CHECK(ind.genes == BitVector(10, 1));
  CHECK_FALSE(ind.evaluated);
}

TEST_CASE("fair leaves give balanced gene frequencies") {
  Rng rng(2);
  const Population pop = sample_population(leaves_only(20, 0.5), 10000, rng);
  for (int g = 0; g < 20; ++g) {
    int ones = 0;
    for (const Individual& ind : pop) ones += ind.genes[g];
    CHECK(ones / 10000.0 >= 0.47);
    CHECK(ones / 10000.0 <= 0.53);
  }
}

TEST_CASE("conditional frequencies follow the split leaves") {
  Model model;
  model.ordering = {0, 1};
  model.trees = {DecisionTree::leaf_with_probability(0.5),
                 DecisionTree::split(0, DecisionTree::leaf_with_probability(0.1),
                                     DecisionTree::leaf_with_probability(0.9))};
  Rng rng(3);
  const Population pop = sample_population(model, 50000, rng);
  double given0 = 0, ones0 = 0, given1 = 0, ones1 = 0;
  for (const Individual& ind : pop) {
    if (ind.genes[0]) {
      ++given1;
      ones1 += ind.genes[1];
    } else {
      ++given0;
      ones0 += ind.genes[1];
    }
  }
  CHECK(std::abs(ones0 / given0 - 0.1) <= 0.02);
  CHECK(std::abs(ones1 / given1 - 0.9) <= 0.02);
}

TEST_CASE("sample_population preconditions and determinism") {
  const Model model = leaves_only(5, 0.3);
  Rng rng(4);
  CHECK_THROWS_AS(sample_population(model, 0, rng), PreconditionError);
  Rng a(11), b(11);
  CHECK(sample_population(model, 50, a) == sample_population(model, 50, b));
}

TEST_CASE("a split on a not-yet-generated gene is an invariant violation") {
  Model model;
  model.ordering = {1, 0};
  model.trees = {DecisionTree::leaf_with_probability(0.5),
                 DecisionTree::split(0, DecisionTree::leaf_with_probability(0.2),
                                     DecisionTree::leaf_with_probability(0.8))};
  Rng rng(5);
  CHECK_THROWS_AS(sample_individual(model, rng), std::logic_error);
}

TEST_CASE("mean traversal depth matches the model's exact expectation") {
  Rng gen(6);
  for (int trial = 0; trial < 5; ++trial) {
    const Model model = testing::random_model(7, 4, gen);
    double expected = 0.0;
    double second = 0.0;
    for (std::uint64_t v = 0; v < 128; ++v) {
      const Individual x(testing::bits_of(v, 7));
      const double p = testing::model_probability(model, x.genes);
      const double d = traversal_depth(model, x);
      expected += p * d;
      second += p * d * d;
    }
    const double sd = std::sqrt(std::max(0.0, second - expected * expected));
    const int count = 20000;
    Rng rng(100 + trial);
    double total = 0.0;
    for (const Individual& ind : sample_population(model, count, rng)) total += traversal_depth(model, ind);
    CHECK(std::abs(total / count - expected) <= 4.0 * sd / std::sqrt(count) + 1e-12);
  }
}

TEST_CASE("subset marginals converge to the product form") {
  Rng gen(7);
  for (int trial = 0; trial < 3; ++trial) {
    const Model model = testing::random_model(6, 3, gen);
    Rng rng(300 + trial);
    const int total = 100000;
    const Population pop = sample_population(model, total, rng);
    const std::vector<int> genes{0, 2, 5};
    std::vector<double> observed(8, 0.0);
    for (const Individual& ind : pop) {
      observed[ind.genes[0] | (ind.genes[2] << 1) | (ind.genes[5] << 2)] += 1;
    }
    CHECK(subset_p_value(model, genes, observed, total) > 0.001);
  }
}

}  // TEST_SUITE
