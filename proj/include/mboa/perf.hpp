#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mboa/engine.hpp"
#include "mboa/error.hpp"

namespace mboa {

/// The five per-generation phases, in the order of the cost model.
enum class Phase { kSelection = 0, kModelBuild, kSample, kReplace, kEvaluate };
inline constexpr int kPhaseCount = 5;
inline constexpr std::array<Phase, kPhaseCount> kPhases = {
    Phase::kSelection, Phase::kModelBuild, Phase::kSample, Phase::kReplace, Phase::kEvaluate};

std::string_view phase_name(Phase phase);
Phase phase_from_name(std::string_view name);

template <typename Scalar>
using PhaseVector = Eigen::Matrix<Scalar, kPhaseCount, 1>;

/// Asymptotic cost terms of one generation:
///   (nN, n^2 N ln N, nN ln N, nN^2, nN)
/// for selection, model building, sampling, replacement and evaluation. The
/// replacement term omits the window fraction; it is fitted jointly with
/// its coefficient.
template <typename Scalar>
PhaseVector<Scalar> term_values(Scalar n, Scalar N) {
  if (!(n >= Scalar(1)) || !(N >= Scalar(1))) {
    throw PreconditionError("term values need n >= 1 and N >= 1");
  }
  using std::log;
  const Scalar nN = n * N;
  const Scalar lnN = log(N);
  PhaseVector<Scalar> t;
  t << nN, n * nN * lnN, nN * lnN, nN * N, nN;
  return t;
}

/// Generation time under the cost model with the model-building term spread
/// over P processors. With `parallel_tail` the replacement and evaluation
/// terms are divided by P as well; that regime is not implemented by the
/// engine and only serves what-if curves.
template <typename Scalar>
Scalar generation_time(const PhaseVector<Scalar>& coefficients, Scalar n, Scalar N, Scalar P,
                       bool parallel_tail = false) {
  PhaseVector<Scalar> cost = coefficients.cwiseProduct(term_values(n, N));
  cost(static_cast<int>(Phase::kModelBuild)) /= P;
  if (parallel_tail) {
    cost(static_cast<int>(Phase::kReplace)) /= P;
    cost(static_cast<int>(Phase::kEvaluate)) /= P;
  }
  return cost.sum();
}

/// Seconds per unit term for every phase, with the coefficient of
/// determination of each phase's fit. The replacement entry is c4 * a.
struct CoefficientFit {
  PhaseVector<double> coefficients = PhaseVector<double>::Zero();
  PhaseVector<double> r_squared = PhaseVector<double>::Zero();

  double coefficient(Phase p) const { return coefficients(static_cast<int>(p)); }
  double r2(Phase p) const { return r_squared(static_cast<int>(p)); }
};

/// Coefficients published for a Pentium-4 2.4 GHz reference machine.
CoefficientFit reference_coefficients();

struct FitOptions {
  /// Drop every sample of the smallest n before fitting (small problems run
  /// faster than the model predicts because they fit in cache).
  bool exclude_smallest_n = false;
};

/// Per-phase least squares through the origin of measured seconds against
/// the phase's term value. Rows sharing (n, N) are first averaged into one
/// point. R^2 is 1 - SS_res / SS_tot with SS_tot taken about the mean of the
/// averaged seconds, clamped to [0, 1].
///
/// Throws FitError with fewer than 3 rows, fewer than 2 distinct (n, N)
/// cells, or a phase whose term takes a single value across cells.
CoefficientFit fit_coefficients(std::span<const PhaseTiming> samples, FitOptions options = {});

/// T(1) / T(P). Throws PreconditionError for P < 1.
double predict_speedup(const CoefficientFit& fit, double n, double N, double P,
                       bool parallel_tail = false);

/// Limit of predict_speedup as P grows without bound.
double speedup_limit(const CoefficientFit& fit, double n, double N);

struct SpeedupPoint {
  int processors = 1;
  double predicted = 1.0;
  std::optional<double> measured;
};

struct SpeedupCurve {
  int n = 0;
  int population_size = 0;
  std::vector<SpeedupPoint> points;
};

SpeedupCurve speedup_curve(const CoefficientFit& fit, int n, int N, std::span<const int> processors,
                           bool parallel_tail = false);

struct CurveDeviation {
  int processors = 1;
  double predicted = 1.0;
  double measured = 1.0;
  double relative_deviation = 0.0;  // (measured - predicted) / predicted
  bool flagged = false;
};

struct CurveComparison {
  std::vector<CurveDeviation> rows;
  double tolerance = 0.25;

  bool within_tolerance() const;
};

/// Measured speedup t(1) / t(P) from (P, seconds) pairs set against the
/// predicted curve. Rows whose |relative deviation| exceeds `tolerance` are
/// flagged. Throws PreconditionError without a P = 1 measurement or when a
/// measured P is missing from the curve. `predicted` gains the measured
/// values.
CurveComparison compare_curves(SpeedupCurve& predicted,
                               std::span<const std::pair<int, double>> measured_seconds,
                               double tolerance = 0.25);

// coefficients.csv: phase,coefficient,r2
void write_coefficients(std::ostream& out, const CoefficientFit& fit);
CoefficientFit read_coefficients(std::istream& in);

// speedup.csv: P,predicted_S[,measured_S]
void write_speedup(std::ostream& out, const SpeedupCurve& curve);
SpeedupCurve read_speedup(std::istream& in);

}  // namespace mboa
