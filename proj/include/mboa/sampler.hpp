#pragma once

#include "mboa/genome.hpp"
#include "mboa/treemodel.hpp"
#include "mboa/types.hpp"

namespace mboa {

/// Ancestral draw: genes are generated in the model's ordering, each by
/// walking its tree with the values already drawn. Throws std::logic_error if
/// a tree splits on a gene that has not been generated yet.
Individual sample_individual(const Model& model, Rng& rng);

/// `count` independent draws from one generator stream.
Population sample_population(const Model& model, int count, Rng& rng);

/// Number of split decisions taken while generating each gene of `ind`
/// under `model`, summed over genes.
int traversal_depth(const Model& model, const Individual& ind);

}  // namespace mboa
