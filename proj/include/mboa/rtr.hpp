#pragma once

#include <span>

#include "mboa/genome.hpp"
#include "mboa/types.hpp"

namespace mboa {

int hamming(const Individual& a, const Individual& b);

/// Window size max(1, round(fraction * N)).
int rtr_window(double fraction, int population_size);

/// Offers `candidate` to the members of `target` listed in `window`: the
/// member nearest in Hamming distance (first listed on ties) is overwritten
/// if the candidate is strictly fitter. Returns the replaced index or -1.
int rtr_offer(Population& target, const Individual& candidate, std::span<const int> window);

/// Restricted tournament replacement of `target` members by `offspring`,
/// processed in order against windows drawn with replacement from the
/// current target. Returns the number of replacements.
int rtr_replace(Population& target, const Population& offspring, double fraction, Rng& rng);

}  // namespace mboa
