#include "mboa/spinglass.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "mboa/error.hpp"

namespace mboa {
namespace {

constexpr int kDegree = 2 * SpinGlassInstance::kDimension;

// Canonical (i < j) pairs of the periodic grid, in generation order.
std::vector<std::pair<int, int>> grid_pairs(int side) {
  std::vector<std::pair<int, int>> pairs;
  const int n = side * side;
  pairs.reserve(static_cast<std::size_t>(n) * SpinGlassInstance::kDimension);
  for (int site = 0; site < n; ++site) {
    const int x = site % side;
    const int y = site / side;
    const int right = y * side + (x + 1) % side;
    const int down = ((y + 1) % side) * side + x;
    pairs.emplace_back(std::min(site, right), std::max(site, right));
    pairs.emplace_back(std::min(site, down), std::max(site, down));
  }
  return pairs;
}

inline int spin(std::uint8_t bit) { return bit ? 1 : -1; }

void check_length(const SpinGlassInstance& inst, std::size_t length) {
  if (length != static_cast<std::size_t>(inst.size())) {
    throw DimensionError("configuration length " + std::to_string(length) +
                         " does not match instance size " + std::to_string(inst.size()));
  }
}

}  // namespace

SpinGlassInstance::SpinGlassInstance(int side, std::uint64_t seed, std::vector<Bond> bonds)
    : side_(side), seed_(seed), bonds_(std::move(bonds)) {
  if (side_ < 2) {
    throw InvalidInstanceError("grid side must be at least 2, got " + std::to_string(side_));
  }
  const int n = size();
  const auto expected_count = static_cast<std::size_t>(n) * kDimension;
  if (bonds_.size() != expected_count) {
    throw InvalidInstanceError("expected " + std::to_string(expected_count) + " bonds, got " +
                               std::to_string(bonds_.size()));
  }

  std::vector<std::pair<int, int>> given;
  given.reserve(bonds_.size());
  for (const Bond& b : bonds_) {
    if (b.i < 0 || b.j >= n || b.i >= b.j) {
      throw InvalidInstanceError("bond (" + std::to_string(b.i) + ", " + std::to_string(b.j) +
                                 ") is not a canonical site pair");
    }
    if (b.coupling != -1 && b.coupling != 1) {
      throw InvalidInstanceError("coupling must be -1 or +1, got " + std::to_string(b.coupling));
    }
    given.emplace_back(b.i, b.j);
  }
  auto expected = grid_pairs(side_);
  std::sort(given.begin(), given.end());
  std::sort(expected.begin(), expected.end());
  if (given != expected) {
    throw InvalidInstanceError("bonds do not form a periodic " + std::to_string(side_) + "x" +
                               std::to_string(side_) + " grid");
  }

  adjacency_.resize(static_cast<std::size_t>(n) * kDegree);
  std::vector<int> fill(n, 0);
  for (const Bond& b : bonds_) {
    adjacency_[static_cast<std::size_t>(b.i) * kDegree + fill[b.i]++] = {b.j, b.coupling};
    adjacency_[static_cast<std::size_t>(b.j) * kDegree + fill[b.j]++] = {b.i, b.coupling};
  }
}

SpinGlassInstance SpinGlassInstance::uniform(int side, int coupling) {
  if (side < 2) {
    throw InvalidInstanceError("grid side must be at least 2, got " + std::to_string(side));
  }
  std::vector<Bond> bonds;
  for (auto [i, j] : grid_pairs(side)) bonds.push_back({i, j, coupling});
  return SpinGlassInstance(side, 0, std::move(bonds));
}

SpinGlassInstance generate_instance(int side, std::uint64_t seed) {
  if (side < 2) {
    throw InvalidInstanceError("grid side must be at least 2, got " + std::to_string(side));
  }
  Rng rng(seed);
  std::vector<Bond> bonds;
  for (auto [i, j] : grid_pairs(side)) {
    const int coupling = (rng() >> 63) ? 1 : -1;
    bonds.push_back({i, j, coupling});
  }
  return SpinGlassInstance(side, seed, std::move(bonds));
}

int energy(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg) {
  check_length(inst, cfg.size());
  int total = 0;
  for (const Bond& b : inst.bonds()) {
    total += b.coupling * (cfg[b.i] == cfg[b.j] ? 1 : -1);
  }
  return total;
}

double fitness(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg) {
  return -static_cast<double>(energy(inst, cfg));
}

int flip_gain(const SpinGlassInstance& inst, std::span<const std::uint8_t> cfg, int site) {
  int field = 0;
  for (auto [nb, coupling] : inst.neighbors(site)) field += coupling * spin(cfg[nb]);
  // E changes by -2 s_k field, fitness by the negation.
  return 2 * spin(cfg[site]) * field;
}

GroundState exhaustive_ground_state(const SpinGlassInstance& inst) {
  const int n = inst.size();
  if (n > kMaxEnumerationSites) {
    throw CapacityError("exhaustive enumeration limited to " +
                        std::to_string(kMaxEnumerationSites) + " sites, instance has " +
                        std::to_string(n));
  }
  // Gray-code walk: each step flips exactly one spin.
  SpinConfiguration cfg(n, 0);
  int current = energy(inst, cfg);
  int best = current;
  std::uint64_t best_code = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int site = std::countr_zero(step);
    current -= flip_gain(inst, cfg, site);
    cfg[site] ^= 1;
    const std::uint64_t code = step ^ (step >> 1);
    if (current < best || (current == best && code < best_code)) {
      best = current;
      best_code = code;
    }
  }
  GroundState result;
  result.energy = best;
  result.configuration.resize(n);
  for (int i = 0; i < n; ++i) result.configuration[i] = (best_code >> i) & 1;
  return result;
}

SpinConfiguration hill_climb(const SpinGlassInstance& inst, SpinConfiguration cfg) {
  check_length(inst, cfg.size());
  const int n = inst.size();
  std::vector<int> gain(n);
  for (int i = 0; i < n; ++i) gain[i] = flip_gain(inst, cfg, i);
  for (;;) {
    const auto best = std::max_element(gain.begin(), gain.end());
    if (*best <= 0) break;
    const int site = static_cast<int>(best - gain.begin());
    cfg[site] ^= 1;
    gain[site] = -gain[site];
    for (auto [nb, coupling] : inst.neighbors(site)) gain[nb] = flip_gain(inst, cfg, nb);
  }
  return cfg;
}

void write_instance(std::ostream& out, const SpinGlassInstance& inst) {
  out << "ising2d s=" << inst.side() << " seed=" << inst.seed() << '\n';
  for (const Bond& b : inst.bonds()) out << b.i << ' ' << b.j << ' ' << b.coupling << '\n';
}

std::string to_string(const SpinGlassInstance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

SpinGlassInstance read_instance(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty instance file", 1);
  int side = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream header(line);
    std::string tag, side_field, seed_field, extra;
    header >> tag >> side_field >> seed_field;
    if (tag != "ising2d" || side_field.rfind("s=", 0) != 0 || seed_field.rfind("seed=", 0) != 0 ||
        (header >> extra)) {
      throw ParseError("expected header 'ising2d s=<s> seed=<seed>'", 1);
    }
    try {
      std::size_t used = 0;
      side = std::stoi(side_field.substr(2), &used);
      if (used != side_field.size() - 2) throw std::invalid_argument("side");
      seed = std::stoull(seed_field.substr(5), &used);
      if (used != seed_field.size() - 5) throw std::invalid_argument("seed");
    } catch (const std::logic_error&) {
      throw ParseError("malformed header values", 1);
    }
  }

  std::vector<Bond> bonds;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("blank line", line_no);
    }
    std::istringstream fields(line);
    Bond b;
    std::string extra;
    if (!(fields >> b.i >> b.j >> b.coupling) || (fields >> extra)) {
      throw ParseError("expected 'i j J'", line_no);
    }
    bonds.push_back(b);
  }
  return SpinGlassInstance(side, seed, std::move(bonds));
}

SpinGlassInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file " + path);
  return read_instance(in);
}

void save_instance(const std::string& path, const SpinGlassInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file " + path);
  write_instance(out, inst);
  if (!out) throw Error("failed writing instance file " + path);
}

}  // namespace mboa
