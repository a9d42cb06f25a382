#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mboa {

/// One byte per bit, each holding 0 or 1. Genomes and spin configurations
/// share this representation, so an individual's genes are directly a spin
/// configuration.
using BitVector = std::vector<std::uint8_t>;

/// Seeded generator used throughout. All randomness flows from explicit
/// instances of this type so runs are reproducible from a single seed.
using Rng = std::mt19937_64;

}  // namespace mboa
