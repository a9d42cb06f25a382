#include "cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mboa/error.hpp"

namespace mboa::cli {
namespace {

std::string bits(const BitVector& v) {
  std::string s;
  s.reserve(v.size());
  for (auto b : v) s.push_back(b ? '1' : '0');
  return s;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  return file;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error("cannot open " + path);
  return file;
}

}  // namespace

void cmd_gen(int side, std::uint64_t seed, const std::string& out_path) {
  save_instance(out_path, generate_instance(side, seed));
}

RunReport cmd_solve(const SolveOptions& options, std::ostream& out) {
  const SpinGlassInstance inst = load_instance(options.instance_path);
  RunReport report = run(inst, options.config);
  if (!options.report_path.empty()) {
    auto file = open_output(options.report_path);
    write_timings(file, report.timings);
  }
  out << "best_energy " << energy(inst, report.best.genes) << '\n'
      << "generations " << report.generations << '\n'
      << "stop " << to_string(report.reason) << '\n'
      << "configuration " << bits(report.best.genes) << '\n';
  return report;
}

GroundState cmd_oracle(const std::string& instance_path, std::ostream& out) {
  const SpinGlassInstance inst = load_instance(instance_path);
  GroundState ground = exhaustive_ground_state(inst);
  out << "ground_energy " << ground.energy << '\n'
      << "configuration " << bits(ground.configuration) << '\n';
  return ground;
}

std::vector<PhaseTiming> cmd_profile(const ProfileOptions& options, std::ostream& out) {
  std::ofstream file;
  if (!options.out_path.empty()) file = open_output(options.out_path);
  std::ostream& sink = options.out_path.empty() ? out : file;
  write_timings_header(sink);

  std::vector<PhaseTiming> rows;
  for (int side : options.sides) {
    const SpinGlassInstance inst = generate_instance(side, options.seed);
    for (int N : options.population_sizes) {
      RunConfig config;
      config.population_size = N;
      config.max_generations = options.generations;
      config.rtr_fraction = options.rtr_fraction;
      config.workers = 1;
      config.seed = options.seed;
      config.stop_on_convergence = false;
      for (const PhaseTiming& row : run(inst, config).timings) {
        write_timing_row(sink, row);
        rows.push_back(row);
      }
      sink.flush();
    }
  }
  return rows;
}

CoefficientFit cmd_fit(const std::string& timings_path, const std::string& out_path,
                       FitOptions options, std::ostream& out) {
  auto in = open_input(timings_path);
  const auto rows = read_timings(in);
  const CoefficientFit fit = fit_coefficients(rows, options);
  if (out_path.empty()) {
    write_coefficients(out, fit);
  } else {
    auto file = open_output(out_path);
    write_coefficients(file, fit);
  }
  return fit;
}

SpeedupCurve cmd_predict(const PredictOptions& options, std::ostream& out) {
  if (options.min_processors < 1 || options.max_processors < options.min_processors) {
    throw PreconditionError("processor range must satisfy 1 <= min <= max");
  }
  auto in = open_input(options.coefficients_path);
  const CoefficientFit fit = read_coefficients(in);
  std::vector<int> processors;
  for (int P = options.min_processors; P <= options.max_processors; ++P) processors.push_back(P);
  SpeedupCurve curve = speedup_curve(fit, options.n, options.population_size, processors,
                                     options.parallel_tail);
  if (options.out_path.empty()) {
    write_speedup(out, curve);
  } else {
    auto file = open_output(options.out_path);
    write_speedup(file, curve);
  }
  if (options.n > 0 && options.n / 2 < options.max_processors) {
    out << "# note: model building is expected to use at most n/2 = " << options.n / 2
        << " processors efficiently\n";
  }
  return curve;
}

CurveComparison cmd_measure(const MeasureOptions& options, std::ostream& out) {
  auto in = open_input(options.coefficients_path);
  const CoefficientFit fit = read_coefficients(in);
  const SpinGlassInstance inst = generate_instance(options.side, options.seed);

  std::vector<std::pair<int, double>> measured;
  for (int W : options.workers) {
    RunConfig config;
    config.population_size = options.population_size;
    config.max_generations = options.generations;
    config.rtr_fraction = options.rtr_fraction;
    config.workers = W;
    config.seed = options.seed;
    config.stop_on_convergence = false;
    const auto start = std::chrono::steady_clock::now();
    run(inst, config);
    measured.emplace_back(
        W, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }

  SpeedupCurve curve = speedup_curve(fit, inst.size(), options.population_size, options.workers);
  CurveComparison comparison = compare_curves(curve, measured, options.tolerance);
  if (options.out_path.empty()) {
    write_speedup(out, curve);
  } else {
    auto file = open_output(options.out_path);
    write_speedup(file, curve);
  }
  for (const CurveDeviation& d : comparison.rows) {
    out << "# P=" << d.processors << " predicted=" << d.predicted << " measured=" << d.measured
        << " deviation=" << d.relative_deviation << (d.flagged ? " FLAGGED" : "") << '\n';
  }
  return comparison;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed Bayesian optimization for 2D Ising spin glasses"};
  app.require_subcommand(1);

  int gen_side = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random spin glass instance");
  gen->add_option("-s,--side", gen_side, "Grid side length")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("-o,--out", gen_out, "Output instance file")->required();

  SolveOptions solve_opts;
  double target = 0.0;
  auto* solve = app.add_subcommand("solve", "Run the optimizer on an instance");
  solve->add_option("instance", solve_opts.instance_path, "Instance file")->required();
  solve->add_option("--n-pop", solve_opts.config.population_size, "Population size N");
  solve->add_option("--gens", solve_opts.config.max_generations, "Generation limit");
  solve->add_option("--rtr-frac", solve_opts.config.rtr_fraction, "RTR window fraction a");
  solve->add_option("--workers", solve_opts.config.workers, "Model-building workers");
  solve->add_option("--seed", solve_opts.config.seed, "Run seed");
  solve->add_flag("--hill-climb", solve_opts.config.hill_climb, "Hill-climb every individual");
  auto* target_opt = solve->add_option("--target-fitness", target, "Stop at this fitness");
  solve->add_option("--report", solve_opts.report_path, "Per-generation timing CSV");

  std::string oracle_path;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive ground state (n <= 25)");
  oracle->add_option("instance", oracle_path, "Instance file")->required();

  ProfileOptions profile_opts;
  auto* profile = app.add_subcommand("profile", "Sequential timing sweep over sizes and N");
  profile->add_option("--sides", profile_opts.sides, "Grid sides")->delimiter(',')->required();
  profile->add_option("--n-pop", profile_opts.population_sizes, "Population sizes")
      ->delimiter(',')
      ->required();
  profile->add_option("--gens", profile_opts.generations, "Generations per cell");
  profile->add_option("--seed", profile_opts.seed, "Seed");
  profile->add_option("--rtr-frac", profile_opts.rtr_fraction, "RTR window fraction a");
  profile->add_option("-o,--out", profile_opts.out_path, "Timings CSV");

  std::string fit_in, fit_out;
  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit per-phase complexity coefficients");
  fit->add_option("timings", fit_in, "Timings CSV")->required();
  fit->add_option("-o,--out", fit_out, "coefficients.csv");
  fit->add_flag("--exclude-smallest-n", fit_opts.exclude_smallest_n,
                "Drop the smallest problem size (cache effects)");

  PredictOptions predict_opts;
  auto* predict = app.add_subcommand("predict", "Predict speedup from coefficients");
  predict->add_option("coefficients", predict_opts.coefficients_path, "coefficients.csv")
      ->required();
  predict->add_option("-n,--n", predict_opts.n, "Problem size n")->required();
  predict->add_option("--n-pop", predict_opts.population_size, "Population size N")->required();
  predict->add_option("--p-min", predict_opts.min_processors, "Smallest P");
  predict->add_option("--p-max", predict_opts.max_processors, "Largest P");
  predict->add_flag("--parallel-tail", predict_opts.parallel_tail,
                    "Also divide replacement and evaluation by P (extrapolation)");
  predict->add_option("-o,--out", predict_opts.out_path, "speedup.csv");

  MeasureOptions measure_opts;
  auto* measure = app.add_subcommand("measure", "Measure threaded speedup against a prediction");
  measure->add_option("coefficients", measure_opts.coefficients_path, "coefficients.csv")
      ->required();
  measure->add_option("-s,--side", measure_opts.side, "Grid side");
  measure->add_option("--n-pop", measure_opts.population_size, "Population size N");
  measure->add_option("--gens", measure_opts.generations, "Generations per run");
  measure->add_option("--seed", measure_opts.seed, "Seed");
  measure->add_option("--workers", measure_opts.workers, "Worker counts (must include 1)")
      ->delimiter(',');
  measure->add_option("--tolerance", measure_opts.tolerance, "Flag threshold");
  measure->add_option("-o,--out", measure_opts.out_path, "speedup.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*gen) {
      cmd_gen(gen_side, gen_seed, gen_out);
    } else if (*solve) {
      if (*target_opt) solve_opts.config.target_fitness = target;
      cmd_solve(solve_opts, out);
    } else if (*oracle) {
      cmd_oracle(oracle_path, out);
    } else if (*profile) {
      cmd_profile(profile_opts, out);
    } else if (*fit) {
      cmd_fit(fit_in, fit_out, fit_opts, out);
    } else if (*predict) {
      cmd_predict(predict_opts, out);
    } else if (*measure) {
      cmd_measure(measure_opts, out);
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kCapacityRefusal;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace mboa::cli
