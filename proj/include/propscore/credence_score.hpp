#pragma once

#include "propscore/bregman.hpp"
#include "propscore/numeric.hpp"
#include "propscore/report.hpp"
#include "propscore/weight_measure.hpp"

#include <memory>
#include <string>
#include <vector>

namespace propscore {

/// Accuracy of a credence x in a single proposition: acc0 when it is false, acc1 when true.
///
/// Both functions are finite on (0, 1). At x in {0, 1} the value may be -inf, as with the
/// log score. The self-accuracy anchors acc0(0) and acc1(1) are fixed data and returned
/// verbatim. The mass-recovery and stationarity checks differentiate numerically and
/// therefore assume absolutely continuous scores; kinks are reported, not represented.
class CredenceScore {
public:
  CredenceScore(RealFn acc0, RealFn acc1, double anchor0, double anchor1,
                std::shared_ptr<const WeightMeasure> measure = nullptr,
                std::shared_ptr<const Entropy> entropy = nullptr);

  /// Anchors taken from acc0(0) and acc1(1).
  static CredenceScore from_functions(RealFn acc0, RealFn acc1);

  double acc0(double x) const;
  double acc1(double x) const;
  /// acc_v(x) for v in {0, 1}.
  double acc(int v, double x) const;

  double anchor0() const noexcept { return anchor0_; }
  double anchor1() const noexcept { return anchor1_; }

  /// The weighting measure the score was built from, if any.
  const std::shared_ptr<const WeightMeasure> &measure() const noexcept { return measure_; }
  /// The entropy the score was built from, if any.
  const std::shared_ptr<const Entropy> &entropy() const noexcept { return entropy_; }

private:
  double checked(const RealFn &f, double x, const char *name) const;

  RealFn acc0_;
  RealFn acc1_;
  double anchor0_;
  double anchor1_;
  std::shared_ptr<const WeightMeasure> measure_;
  std::shared_ptr<const Entropy> entropy_;
};

/// acc_v(x) = acc_v(v) - integral from x to v of (v - t) lambda(dt). Measure domain must be [0, 1].
CredenceScore from_measure(const WeightMeasure &measure, double anchor0 = 0.0, double anchor1 = 0.0,
                           const Tolerances &tol = {});

/// acc_v(x) = phi(x) + (v - x) phi'(x), anchors phi(0) and phi(1).
CredenceScore from_entropy(const Entropy &phi);

/// p acc1(x) + (1 - p) acc0(x). A zero weight drops its term, so -inf only
/// propagates with positive weight.
double expected_score(const CredenceScore &s, double p, double x);

/// phi(p) = p acc1(p) + (1 - p) acc0(p) with phi' = acc1 - acc0.
/// Throws InvalidEntropy when the result is not convex, which cannot happen for proper s.
Entropy entropy_of(const CredenceScore &s);

struct MassRecovery {
  double mass = 0.0;       ///< acc0'(t) / -t
  double from_acc1 = 0.0;  ///< acc1'(t) / (1 - t)
  double discrepancy = 0.0;
  bool consistent = true;  ///< discrepancy <= 1e-3
  bool smooth = true;      ///< one-sided derivatives agree
  std::string warning;
};

/// Recovers the mass function at t in (0, 1) by finite differences.
MassRecovery recover_mass(const CredenceScore &s, double t, const Tolerances &tol = {});

/// For p on the interior grid i/(n_p + 1), locates argmax of expected_score(s, p, .) on [0, 1].
VerificationReport check_propriety(const CredenceScore &s, std::size_t n_p, const Tolerances &tol = {});

/// acc1 strictly increasing and acc0 strictly decreasing on an n-point grid of [0, 1].
bool check_truth_directedness(const CredenceScore &s, std::size_t n);
VerificationReport truth_directedness_report(const CredenceScore &s, std::size_t n);

/// |t acc1'(t) + (1 - t) acc0'(t)|, which vanishes for proper smooth scores.
double check_stationarity(const CredenceScore &s, double t, const Tolerances &tol = {});
VerificationReport stationarity_report(const CredenceScore &s, std::size_t n, double threshold,
                                       const Tolerances &tol = {});

/// acc_v(y) - acc_v(x).
double score_difference(const CredenceScore &s, int v, double x, double y);

/// The three equivalent integral identities for a score built from `measure`, checked on an
/// n x n x n grid of (x, y, p). Non-finite values are skipped.
VerificationReport equivalence_report(const CredenceScore &s, const WeightMeasure &measure, std::size_t n,
                                      double threshold, const Tolerances &tol = {});

/// recover_mass against the measure density at n interior points (relative residual).
VerificationReport mass_roundtrip_report(const CredenceScore &s, const WeightMeasure &measure, std::size_t n,
                                         double threshold, const Tolerances &tol = {});

/// Second derivative of entropy_of(s) against recover_mass at n interior points (relative).
VerificationReport entropy_link_report(const CredenceScore &s, std::size_t n, double threshold,
                                       const Tolerances &tol = {});

CredenceScore brier();
CredenceScore log_score();
/// acc0(x) = acc1(x) = x: expected score is x for every p, so the argmax is always 1.
CredenceScore improper_linear_score();
/// acc1(x) = x, acc0(x) = -x: truth-directed, but expected score is linear in x.
CredenceScore antisymmetric_linear_score();

} // namespace propscore
