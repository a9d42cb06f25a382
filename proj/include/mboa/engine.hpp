#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mboa/genome.hpp"
#include "mboa/spinglass.hpp"
#include "mboa/treemodel.hpp"
#include "mboa/types.hpp"

namespace mboa {

class WorkerPool;

struct RunConfig {
  int population_size = 300;
  int max_generations = 50;
  double rtr_fraction = 0.05;
  int workers = 1;
  std::uint64_t seed = 1;
  bool hill_climb = false;
  std::optional<double> target_fitness;
  bool stop_on_convergence = true;

  /// Throws PreconditionError unless N >= 4 is even, 1 <= workers <= n and
  /// the RTR fraction lies in (0, 1].
  void validate(int genome_length) const;
};

/// Wall-clock seconds of each phase of one generation.
struct PhaseTiming {
  int generation = 0;
  int n = 0;
  int population_size = 0;
  int workers = 1;
  double height = 0.0;
  double selection = 0.0;
  double model_build = 0.0;
  double sample = 0.0;
  double replace = 0.0;
  double evaluate = 0.0;
  double best_fitness = 0.0;

  double total() const noexcept { return selection + model_build + sample + replace + evaluate; }
  friend bool operator==(const PhaseTiming&, const PhaseTiming&) = default;
};

struct EngineState {
  Population population;
  Individual best;
  int generation = 0;
  Population parents;  // selection buffer, reused across generations
};

struct StepOutcome {
  PhaseTiming timing;
  Model model;
};

enum class StopReason { kTargetReached, kMaxGenerations, kConverged };

std::string to_string(StopReason reason);

struct RunReport {
  Individual best;
  int generations = 0;
  StopReason reason = StopReason::kMaxGenerations;
  std::vector<PhaseTiming> timings;
  Population final_population;
};

/// Evaluates every member, hill-climbing each first when requested.
void evaluate_population(const SpinGlassInstance& inst, Population& pop, bool hill_climb);

/// Uniform random population of size N, evaluated.
EngineState initialize(const SpinGlassInstance& inst, const RunConfig& config, Rng& rng);

/// One generation: selection, model building on `pool`, sampling of N
/// offspring, their evaluation, and restricted tournament replacement.
StepOutcome step(EngineState& state, const SpinGlassInstance& inst, const RunConfig& config,
                 Rng& rng, WorkerPool& pool);

/// Runs until the target fitness is reached, the population converges, or
/// the generation limit is hit.
RunReport run(const SpinGlassInstance& inst, const RunConfig& config);

// CSV with header gen,n,N,W,h,sel_s,build_s,sample_s,replace_s,eval_s,best_fitness.
inline constexpr const char* kTimingHeader =
    "gen,n,N,W,h,sel_s,build_s,sample_s,replace_s,eval_s,best_fitness";
void write_timings_header(std::ostream& out);
void write_timing_row(std::ostream& out, const PhaseTiming& row);
void write_timings(std::ostream& out, const std::vector<PhaseTiming>& rows);
std::vector<PhaseTiming> read_timings(std::istream& in);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace mboa
