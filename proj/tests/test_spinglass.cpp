#include <doctest.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "mboa/error.hpp"
#include "mboa/spinglass.hpp"
#include "test_support.hpp"

using namespace mboa;
using mboa::testing::bits_of;
using mboa::testing::random_bits;

namespace {

// Minimum over all 2^n configurations by direct evaluation, lowest value
// first among ties.
GroundState brute_force_ground(const SpinGlassInstance& inst) {
  const int n = inst.size();
  GroundState best{bits_of(0, n), std::numeric_limits<int>::max()};
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    BitVector cfg = bits_of(v, n);
    const int e = energy(inst, cfg);
    if (e < best.energy) best = {cfg, e};
  }
  return best;
}

bool locally_optimal(const SpinGlassInstance& inst, BitVector cfg) {
  const double base = fitness(inst, cfg);
  for (int i = 0; i < inst.size(); ++i) {
    cfg[i] ^= 1;
    const double flipped = fitness(inst, cfg);
    cfg[i] ^= 1;
    if (flipped > base) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("spinglass") {

TEST_CASE("generated instances have d*n couplings of unit magnitude") {
  const auto inst = generate_instance(4, 7);
  CHECK(inst.size() == 16);
  CHECK(inst.bonds().size() == 32);
  for (const Bond& b : inst.bonds()) {
    CHECK((b.coupling == 1 || b.coupling == -1));
    CHECK(b.i < b.j);
  }
  for (int site = 0; site < inst.size(); ++site) CHECK(inst.neighbors(site).size() == 4);

  CHECK(generate_instance(2, 11).bonds().size() == 8);
}

TEST_CASE("generation is deterministic per seed") {
  CHECK(to_string(generate_instance(5, 42)) == to_string(generate_instance(5, 42)));
  CHECK(to_string(generate_instance(5, 42)) != to_string(generate_instance(5, 43)));
}

TEST_CASE("couplings are balanced in sign") {
  const auto inst = generate_instance(30, 3);
  const auto negative = std::count_if(inst.bonds().begin(), inst.bonds().end(),
                                      [](const Bond& b) { return b.coupling < 0; });
  // 1800 fair draws: mean 900, sd ~21.2
  CHECK(std::abs(negative - 900) < 4 * 21.3);
}

TEST_CASE("side below 2 is rejected") {
  CHECK_THROWS_AS(generate_instance(1, 0), InvalidInstanceError);
  CHECK_THROWS_AS(generate_instance(0, 0), InvalidInstanceError);
}

TEST_CASE("energy of uniform couplings") {
  const BitVector up(16, 1);
  CHECK(energy(SpinGlassInstance::uniform(4, -1), up) == -32);
  CHECK(energy(SpinGlassInstance::uniform(4, 1), up) == 32);
  CHECK(fitness(SpinGlassInstance::uniform(4, -1), up) == 32.0);
}

TEST_CASE("energy agrees with a grid-walk recomputation") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = generate_instance(3 + trial % 4, 1000 + trial);
    const BitVector cfg = random_bits(inst.size(), rng);
    CHECK(energy(inst, cfg) == mboa::testing::grid_energy(inst, cfg));
  }
}

TEST_CASE("energy rejects a configuration of the wrong length") {
  const auto inst = generate_instance(3, 1);
  CHECK_THROWS_AS(energy(inst, BitVector(8, 0)), DimensionError);
  CHECK_THROWS_AS(hill_climb(inst, BitVector(10, 0)), DimensionError);
}

TEST_CASE("fitness is negated energy and peaks at the ground state") {
  const auto inst = generate_instance(3, 5);
  const GroundState ground = exhaustive_ground_state(inst);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t v = 0; v < 512; ++v) {
    const BitVector cfg = bits_of(v, 9);
    CHECK(fitness(inst, cfg) == -static_cast<double>(energy(inst, cfg)));
    best = std::max(best, fitness(inst, cfg));
  }
  CHECK(fitness(inst, ground.configuration) == best);
}

TEST_CASE("exhaustive ground state of uniform couplings") {
  const auto ferro = exhaustive_ground_state(SpinGlassInstance::uniform(3, -1));
  CHECK(ferro.energy == -18);
  // Both aligned states reach -18; the all-zero bit vector has the lower value.
  CHECK(ferro.configuration == BitVector(9, 0));

  const auto anti_inst = SpinGlassInstance::uniform(3, 1);
  const auto anti = exhaustive_ground_state(anti_inst);
  CHECK(anti.energy > -18);
  CHECK(anti.energy == brute_force_ground(anti_inst).energy);
}

TEST_CASE("exhaustive ground state matches direct enumeration") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto inst = generate_instance(4, seed);
    const GroundState fast = exhaustive_ground_state(inst);
    const GroundState slow = brute_force_ground(inst);
    CHECK(fast.energy == slow.energy);
    CHECK(fast.configuration == slow.configuration);
    CHECK(energy(inst, fast.configuration) == fast.energy);
  }
}

TEST_CASE("exhaustive ground state refuses large instances") {
  CHECK_THROWS_AS(exhaustive_ground_state(generate_instance(6, 1)), CapacityError);
}

TEST_CASE("hill climbing") {
  const auto ferro = SpinGlassInstance::uniform(4, -1);
  SUBCASE("a local optimum is a fixed point") {
    const BitVector up(16, 1);
    CHECK(hill_climb(ferro, up) == up);
  }
  SUBCASE("a single defect is repaired") {
    BitVector cfg(16, 1);
    cfg[5] = 0;
    CHECK(hill_climb(ferro, cfg) == BitVector(16, 1));
  }
  SUBCASE("random starts end locally optimal and never lose fitness") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      const auto inst = generate_instance(4, 200 + trial);
      const BitVector start = random_bits(16, rng);
      const BitVector end = hill_climb(inst, start);
      CHECK(locally_optimal(inst, end));
      CHECK(fitness(inst, end) >= fitness(inst, start));
    }
  }
}

TEST_CASE("global spin flip leaves energy unchanged") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = generate_instance(2 + trial % 9, trial);
    BitVector cfg = random_bits(inst.size(), rng);
    const int e = energy(inst, cfg);
    for (auto& b : cfg) b ^= 1;
    CHECK(energy(inst, cfg) == e);
  }
}

TEST_CASE("energy range, parity and single-flip change") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = generate_instance(2 + trial % 7, 500 + trial);
    const int dn = 2 * inst.size();
    BitVector cfg = random_bits(inst.size(), rng);
    const int e = energy(inst, cfg);
    CHECK(e >= -dn);
    CHECK(e <= dn);
    CHECK((e - dn) % 2 == 0);
    const int site = static_cast<int>(rng() % inst.size());
    cfg[site] ^= 1;
    CHECK(std::abs(energy(inst, cfg) - e) <= 8);
  }
}

TEST_CASE("ground energy bounds random configurations") {
  Rng rng(21);
  for (std::uint64_t seed : {4, 9, 16}) {
    const auto inst = generate_instance(4, seed);
    const int ground = exhaustive_ground_state(inst).energy;
    for (int k = 0; k < 1000; ++k) CHECK(ground <= energy(inst, random_bits(16, rng)));
  }
}

TEST_CASE("instance text format") {
  const auto inst = generate_instance(3, 12);
  const std::string text = to_string(inst);
  CHECK(text.rfind("ising2d s=3 seed=12\n", 0) == 0);
  CHECK(text.back() == '\n');

  std::istringstream in(text);
  CHECK(read_instance(in) == inst);

  SUBCASE("malformed header") {
    std::istringstream bad("ising3d s=3 seed=1\n");
    CHECK_THROWS_AS(read_instance(bad), ParseError);
  }
  SUBCASE("malformed bond line reports its line number") {
    std::string broken = text;
    broken.replace(broken.find('\n') + 1, 0, "0 1\n");
    std::istringstream bad(broken);
    try {
      read_instance(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("bonds that are not grid neighbors") {
    std::istringstream bad("ising2d s=3 seed=1\n0 4 1\n");
    CHECK_THROWS_AS(read_instance(bad), InvalidInstanceError);
  }
}

}  // TEST_SUITE
