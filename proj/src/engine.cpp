#include "mboa/engine.hpp"

#include <charconv>
#include <chrono>
#include <sstream>

#include "mboa/error.hpp"
#include "mboa/rtr.hpp"
#include "mboa/sampler.hpp"
#include "mboa/worker_pool.hpp"

namespace mboa {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void update_best(EngineState& state) {
  const Individual& leader = state.population[state.population.best_index()];
  if (!state.best.evaluated || leader.fitness > state.best.fitness) state.best = leader;
}

}  // namespace

void RunConfig::validate(int genome_length) const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw PreconditionError("population size must be an even number >= 4, got " +
                            std::to_string(population_size));
  }
  if (workers < 1 || workers > genome_length) {
    throw PreconditionError("worker count must lie in [1, " + std::to_string(genome_length) +
                            "], got " + std::to_string(workers));
  }
  if (max_generations < 0) throw PreconditionError("generation limit must be non-negative");
  rtr_window(rtr_fraction, population_size);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTargetReached: return "target";
    case StopReason::kMaxGenerations: return "max_generations";
    case StopReason::kConverged: return "converged";
  }
  return "unknown";
}

void evaluate_population(const SpinGlassInstance& inst, Population& pop, bool hill_climb) {
  for (Individual& ind : pop) {
    if (hill_climb) ind.genes = mboa::hill_climb(inst, std::move(ind.genes));
    ind.fitness = fitness(inst, ind.genes);
    ind.evaluated = true;
  }
}

EngineState initialize(const SpinGlassInstance& inst, const RunConfig& config, Rng& rng) {
  config.validate(inst.size());
  EngineState state;
  state.population = random_population(inst.size(), config.population_size, rng);
  evaluate_population(inst, state.population, config.hill_climb);
  update_best(state);
  return state;
}

StepOutcome step(EngineState& state, const SpinGlassInstance& inst, const RunConfig& config,
                 Rng& rng, WorkerPool& pool) {
  StepOutcome out;
  PhaseTiming& t = out.timing;
  t.generation = state.generation;
  t.n = inst.size();
  t.population_size = state.population.size();
  t.workers = pool.workers();

  auto start = Clock::now();
  tournament_select(state.population, state.population.size(), rng, state.parents);
  t.selection = seconds_since(start);

  // The ordering is drawn here so the worker threads never touch `rng`.
  start = Clock::now();
  std::vector<int> ordering = random_ordering(inst.size(), rng);
  out.model = build_model(state.parents, std::move(ordering), pool);
  t.model_build = seconds_since(start);
  t.height = measure_height(out.model);

  start = Clock::now();
  Population offspring = sample_population(out.model, state.population.size(), rng);
  t.sample = seconds_since(start);

  start = Clock::now();
  evaluate_population(inst, offspring, config.hill_climb);
  t.evaluate = seconds_since(start);

  start = Clock::now();
  rtr_replace(state.population, offspring, config.rtr_fraction, rng);
  t.replace = seconds_since(start);

  update_best(state);
  t.best_fitness = state.best.fitness;
  ++state.generation;
  return out;
}

RunReport run(const SpinGlassInstance& inst, const RunConfig& config) {
  config.validate(inst.size());
  Rng rng(config.seed);
  WorkerPool pool(config.workers);
  EngineState state = initialize(inst, config, rng);

  RunReport report;
  for (;;) {
    if (config.target_fitness && state.best.fitness >= *config.target_fitness) {
      report.reason = StopReason::kTargetReached;
      break;
    }
    if (state.generation >= config.max_generations) {
      report.reason = StopReason::kMaxGenerations;
      break;
    }
    if (config.stop_on_convergence && state.population.converged()) {
      report.reason = StopReason::kConverged;
      break;
    }
    report.timings.push_back(step(state, inst, config, rng, pool).timing);
  }
  report.best = state.best;
  report.generations = state.generation;
  report.final_population = std::move(state.population);
  return report;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void write_timings_header(std::ostream& out) { out << kTimingHeader << '\n'; }

void write_timing_row(std::ostream& out, const PhaseTiming& r) {
  out << r.generation << ',' << r.n << ',' << r.population_size << ',' << r.workers << ','
      << format_double(r.height) << ',' << format_double(r.selection) << ','
      << format_double(r.model_build) << ',' << format_double(r.sample) << ','
      << format_double(r.replace) << ',' << format_double(r.evaluate) << ','
      << format_double(r.best_fitness) << '\n';
}

void write_timings(std::ostream& out, const std::vector<PhaseTiming>& rows) {
  write_timings_header(out);
  for (const PhaseTiming& r : rows) write_timing_row(out, r);
}

namespace {

template <typename T>
T parse_field(const std::string& text, int line_no, const char* name) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw ParseError(std::string("bad value for ") + name + ": '" + text + "'", line_no);
  }
  return value;
}

}  // namespace

std::vector<PhaseTiming> read_timings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTimingHeader) {
    throw ParseError(std::string("expected header '") + kTimingHeader + "'", 1);
  }
  std::vector<PhaseTiming> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream split(line);
    for (std::string field; std::getline(split, field, ',');) fields.push_back(field);
    if (fields.size() != 11) throw ParseError("expected 11 columns", line_no);
    PhaseTiming r;
    r.generation = parse_field<int>(fields[0], line_no, "gen");
    r.n = parse_field<int>(fields[1], line_no, "n");
    r.population_size = parse_field<int>(fields[2], line_no, "N");
    r.workers = parse_field<int>(fields[3], line_no, "W");
    r.height = parse_field<double>(fields[4], line_no, "h");
    r.selection = parse_field<double>(fields[5], line_no, "sel_s");
    r.model_build = parse_field<double>(fields[6], line_no, "build_s");
    r.sample = parse_field<double>(fields[7], line_no, "sample_s");
    r.replace = parse_field<double>(fields[8], line_no, "replace_s");
    r.evaluate = parse_field<double>(fields[9], line_no, "eval_s");
    r.best_fitness = parse_field<double>(fields[10], line_no, "best_fitness");
    if (r.selection < 0 || r.model_build < 0 || r.sample < 0 || r.replace < 0 || r.evaluate < 0) {
      throw ParseError("negative duration", line_no);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mboa
