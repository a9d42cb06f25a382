#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mboa/types.hpp"

namespace mboa {

/// One coupling between neighboring sites, stored with i < j.
struct Bond {
  int i = 0;
  int j = 0;
  int coupling = 0;  // -1 ferromagnetic, +1 antiferromagnetic

  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Bit b encodes spin 2b - 1.
using SpinConfiguration = BitVector;

/// Ising spin glass on a periodic s x s grid (d = 2).
///
/// Every site contributes one bond to its +x neighbor and one to its +y
/// neighbor, so there are exactly d*n bonds and each site has degree 2d.
/// For s = 2 the wrap makes the +x and -x neighbors coincide; the two bonds
/// joining such a pair are kept as distinct couplings.
class SpinGlassInstance {
 public:
  static constexpr int kDimension = 2;

  /// Validates grid adjacency, coupling signs and degree; throws
  /// InvalidInstanceError otherwise.
  SpinGlassInstance(int side, std::uint64_t seed, std::vector<Bond> bonds);

  /// Instance with every coupling set to `coupling` (seed recorded as 0).
  static SpinGlassInstance uniform(int side, int coupling);

  int side() const noexcept { return side_; }
  int dimension() const noexcept { return kDimension; }
  int size() const noexcept { return side_ * side_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }

  /// (neighbor, coupling) pairs of `site`, 2d entries.
  std::span<const std::pair<int, int>> neighbors(int site) const {
    return {adjacency_.data() + static_cast<std::size_t>(site) * 2 * kDimension,
            2 * kDimension};
  }

  friend bool operator==(const SpinGlassInstance& a, const SpinGlassInstance& b) {
    return a.side_ == b.side_ && a.seed_ == b.seed_ && a.bonds_ == b.bonds_;
  }

 private:
  int side_;
  std::uint64_t seed_;
  std::vector<Bond> bonds_;
  std::vector<std::pair<int, int>> adjacency_;
};

/// Random instance with couplings of either sign drawn with probability 1/2.
SpinGlassInstance generate_instance(int side, std::uint64_t seed);

/// Sum of J_ij * s_i * s_j over all bonds.
int energy(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg);

/// Negated energy; the optimizer maximizes this.
double fitness(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg);

/// Fitness change caused by flipping `site`.
int flip_gain(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg, int site);

struct GroundState {
  SpinConfiguration configuration;
  int energy = 0;
};

inline constexpr int kMaxEnumerationSites = 25;

/// Minimum-energy configuration by enumerating all 2^n states. Among equal
/// energies the configuration with the lowest binary value wins, where gene
/// i is bit i. Throws CapacityError for n > 25.
GroundState exhaustive_ground_state(const SpinGlassInstance& inst);

/// Steepest-ascent single-flip local search. Repeatedly applies the flip with
/// the largest fitness gain (lowest site on ties) until no flip improves.
SpinConfiguration hill_climb(const SpinGlassInstance& inst, SpinConfiguration cfg);

// Text format: header `ising2d s=<s> seed=<seed>` then one `i j J` line per bond.
void write_instance(std::ostream& out, const SpinGlassInstance& inst);
std::string to_string(const SpinGlassInstance& inst);
SpinGlassInstance read_instance(std::istream& in);
SpinGlassInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const SpinGlassInstance& inst);

}  // namespace mboa
