#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mboa/engine.hpp"
#include "mboa/perf.hpp"
#include "mboa/spinglass.hpp"

namespace mboa::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kCapacityRefusal = 3 };

void cmd_gen(int side, std::uint64_t seed, const std::string& out_path);

struct SolveOptions {
  std::string instance_path;
  RunConfig config;
  std::string report_path;  // empty: no CSV
};

/// Prints best energy, generations and the best configuration.
RunReport cmd_solve(const SolveOptions& options, std::ostream& out);

/// Prints the ground energy and one configuration attaining it.
GroundState cmd_oracle(const std::string& instance_path, std::ostream& out);

struct ProfileOptions {
  std::vector<int> sides;
  std::vector<int> population_sizes;
  int generations = 5;
  std::uint64_t seed = 1;
  double rtr_fraction = 0.05;
  std::string out_path;  // empty: write to the stream
};

/// One sequential engine run per (side, N) cell for a fixed number of
/// generations; every generation's timing row is written as CSV.
std::vector<PhaseTiming> cmd_profile(const ProfileOptions& options, std::ostream& out);

CoefficientFit cmd_fit(const std::string& timings_path, const std::string& out_path,
                       FitOptions options, std::ostream& out);

struct PredictOptions {
  std::string coefficients_path;
  int n = 0;
  int population_size = 0;
  int min_processors = 1;
  int max_processors = 50;
  bool parallel_tail = false;
  std::string out_path;
};

SpeedupCurve cmd_predict(const PredictOptions& options, std::ostream& out);

struct MeasureOptions {
  std::string coefficients_path;
  int side = 16;
  int population_size = 2000;
  int generations = 3;
  std::uint64_t seed = 1;
  double rtr_fraction = 0.05;
  std::vector<int> workers{1, 2, 4, 8};
  double tolerance = 0.25;
  std::string out_path;
};

/// Times identical-seed runs at each worker count and compares the measured
/// speedup with the prediction from the coefficients file.
CurveComparison cmd_measure(const MeasureOptions& options, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mboa::cli
