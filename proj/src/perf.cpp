#include "mboa/perf.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace mboa {
namespace {

constexpr std::array<std::string_view, kPhaseCount> kNames = {"selection", "model_build", "sample",
                                                              "replace", "evaluate"};

double phase_seconds(const PhaseTiming& t, Phase p) {
  switch (p) {
    case Phase::kSelection: return t.selection;
    case Phase::kModelBuild: return t.model_build;
    case Phase::kSample: return t.sample;
    case Phase::kReplace: return t.replace;
    case Phase::kEvaluate: return t.evaluate;
  }
  return 0.0;
}

double parse_double(const std::string& text, int line_no) {
  double value = 0.0;
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(text.data(), last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw ParseError("bad number '" + text + "'", line_no);
  }
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string_view phase_name(Phase phase) { return kNames[static_cast<std::size_t>(phase)]; }

Phase phase_from_name(std::string_view name) {
  for (Phase p : kPhases) {
    if (phase_name(p) == name) return p;
  }
  throw ParseError("unknown phase '" + std::string(name) + "'", 0);
}

CoefficientFit reference_coefficients() {
  CoefficientFit fit;
  fit.coefficients << 8.73e-9, 1.00e-7, 1.58e-7, 2.18e-10, 1.34e-7;
  fit.r_squared << 0.978, 0.979, 0.934, 0.989, 0.918;
  return fit;
}

CoefficientFit fit_coefficients(std::span<const PhaseTiming> samples, FitOptions options) {
  if (samples.size() < 3) {
    throw FitError("need at least 3 timing samples, got " + std::to_string(samples.size()));
  }
  int smallest_n = samples.front().n;
  for (const PhaseTiming& t : samples) smallest_n = std::min(smallest_n, t.n);

  // Mean seconds per (n, N) cell.
  std::map<std::pair<int, int>, std::pair<PhaseVector<double>, int>> cells;
  for (const PhaseTiming& t : samples) {
    if (options.exclude_smallest_n && t.n == smallest_n) continue;
    auto& [sum, count] = cells.try_emplace({t.n, t.population_size}, PhaseVector<double>::Zero(), 0)
                             .first->second;
    for (Phase p : kPhases) sum(static_cast<int>(p)) += phase_seconds(t, p);
    ++count;
  }
  if (cells.size() < 2) {
    throw FitError("need at least 2 distinct (n, N) cells, got " + std::to_string(cells.size()));
  }

  const auto rows = static_cast<Eigen::Index>(cells.size());
  Eigen::Matrix<double, Eigen::Dynamic, kPhaseCount> terms(rows, kPhaseCount);
  Eigen::Matrix<double, Eigen::Dynamic, kPhaseCount> seconds(rows, kPhaseCount);
  Eigen::Index r = 0;
  for (const auto& [key, cell] : cells) {
    terms.row(r) = term_values<double>(key.first, key.second).transpose();
    seconds.row(r) = (cell.first / cell.second).transpose();
    ++r;
  }

  CoefficientFit fit;
  for (Phase p : kPhases) {
    const int k = static_cast<int>(p);
    const auto x = terms.col(k);
    const auto y = seconds.col(k);
    if (x.maxCoeff() == x.minCoeff()) {
      throw FitError("phase " + std::string(phase_name(p)) +
                     " has no spread in its term values across (n, N) cells");
    }
    const double slope = x.dot(y) / x.squaredNorm();
    const double ss_res = (y - slope * x).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    fit.coefficients(k) = std::max(0.0, slope);
    fit.r_squared(k) = std::clamp(r2, 0.0, 1.0);
  }
  return fit;
}

double predict_speedup(const CoefficientFit& fit, double n, double N, double P,
                       bool parallel_tail) {
  if (!(P >= 1.0)) throw PreconditionError("processor count must be >= 1");
  const double sequential = generation_time(fit.coefficients, n, N, 1.0, parallel_tail);
  const double parallel = generation_time(fit.coefficients, n, N, P, parallel_tail);
  return sequential / parallel;
}

double speedup_limit(const CoefficientFit& fit, double n, double N) {
  const PhaseVector<double> cost = fit.coefficients.cwiseProduct(term_values(n, N));
  return cost.sum() / (cost.sum() - cost(static_cast<int>(Phase::kModelBuild)));
}

SpeedupCurve speedup_curve(const CoefficientFit& fit, int n, int N, std::span<const int> processors,
                           bool parallel_tail) {
  SpeedupCurve curve{n, N, {}};
  for (int P : processors) {
    curve.points.push_back({P, predict_speedup(fit, n, N, P, parallel_tail), std::nullopt});
  }
  return curve;
}

bool CurveComparison::within_tolerance() const {
  return std::none_of(rows.begin(), rows.end(), [](const CurveDeviation& d) { return d.flagged; });
}

CurveComparison compare_curves(SpeedupCurve& predicted,
                               std::span<const std::pair<int, double>> measured_seconds,
                               double tolerance) {
  const auto baseline = std::find_if(measured_seconds.begin(), measured_seconds.end(),
                                     [](const auto& m) { return m.first == 1; });
  if (baseline == measured_seconds.end()) {
    throw PreconditionError("measured timings need a P = 1 baseline");
  }
  CurveComparison report;
  report.tolerance = tolerance;
  for (auto [P, secs] : measured_seconds) {
    auto point = std::find_if(predicted.points.begin(), predicted.points.end(),
                              [P = P](const SpeedupPoint& s) { return s.processors == P; });
    if (point == predicted.points.end()) {
      throw PreconditionError("no prediction for P = " + std::to_string(P));
    }
    if (!(secs > 0.0)) throw PreconditionError("measured time must be positive");
    const double measured = baseline->second / secs;
    point->measured = measured;
    const double deviation = (measured - point->predicted) / point->predicted;
    report.rows.push_back(
        {P, point->predicted, measured, deviation, std::abs(deviation) > tolerance});
  }
  return report;
}

void write_coefficients(std::ostream& out, const CoefficientFit& fit) {
  out << "phase,coefficient,r2\n";
  for (Phase p : kPhases) {
    out << phase_name(p) << ',' << format_double(fit.coefficient(p)) << ','
        << format_double(fit.r2(p)) << '\n';
  }
}

CoefficientFit read_coefficients(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "phase,coefficient,r2") {
    throw ParseError("expected header 'phase,coefficient,r2'", 1);
  }
  CoefficientFit fit;
  std::array<bool, kPhaseCount> seen{};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) throw ParseError("expected 3 columns", line_no);
    Phase p;
    try {
      p = phase_from_name(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    const int k = static_cast<int>(p);
    if (seen[static_cast<std::size_t>(k)]) throw ParseError("duplicate phase", line_no);
    seen[static_cast<std::size_t>(k)] = true;
    fit.coefficients(k) = parse_double(fields[1], line_no);
    fit.r_squared(k) = parse_double(fields[2], line_no);
    if (fit.coefficients(k) < 0.0) throw ParseError("negative coefficient", line_no);
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParseError("coefficients file is missing a phase", line_no);
  }
  return fit;
}

void write_speedup(std::ostream& out, const SpeedupCurve& curve) {
  const bool with_measured = std::any_of(curve.points.begin(), curve.points.end(),
                                         [](const SpeedupPoint& s) { return s.measured.has_value(); });
  out << (with_measured ? "P,predicted_S,measured_S\n" : "P,predicted_S\n");
  for (const SpeedupPoint& s : curve.points) {
    out << s.processors << ',' << format_double(s.predicted);
    if (with_measured) {
      out << ',';
      if (s.measured) out << format_double(*s.measured);
    }
    out << '\n';
  }
}

SpeedupCurve read_speedup(std::istream& in) {
  std::string line;
  std::getline(in, line);
  bool with_measured = false;
  if (line == "P,predicted_S,measured_S") {
    with_measured = true;
  } else if (line != "P,predicted_S") {
    throw ParseError("expected header 'P,predicted_S[,measured_S]'", 1);
  }
  SpeedupCurve curve;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != (with_measured ? 3u : 2u)) throw ParseError("wrong column count", line_no);
    SpeedupPoint s;
    s.processors = static_cast<int>(parse_double(fields[0], line_no));
    s.predicted = parse_double(fields[1], line_no);
    if (with_measured && !fields[2].empty()) s.measured = parse_double(fields[2], line_no);
    curve.points.push_back(s);
  }
  return curve;
}

}  // namespace mboa
