#pragma once

#include "propscore/bregman.hpp"
#include "propscore/numeric.hpp"
#include "propscore/report.hpp"
#include "propscore/weight_measure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace propscore {

struct Outcome {
  std::string label;
  double value;
};

/// A real-valued random variable on a finite, labelled sample space.
class RandomVariable {
public:
  /// Throws InvalidVariable on duplicate labels or fewer than two distinct values.
  explicit RandomVariable(std::vector<Outcome> outcomes);

  const std::vector<Outcome> &outcomes() const noexcept { return outcomes_; }
  /// Convex hull of the range.
  Interval hull() const noexcept { return hull_; }
  /// Distinct values, ascending.
  std::vector<double> values() const;
  /// Throws MismatchError for unknown labels.
  double value_of(const std::string &label) const;
  /// Label of the first outcome taking value v, if any.
  std::optional<std::string> label_with_value(double v) const;

private:
  std::vector<Outcome> outcomes_;
  Interval hull_{0.0, 0.0};
};

/// Finitely supported probability over outcome labels.
class FiniteProbability {
public:
  /// Throws InvalidProbability unless weights are non-negative and sum to 1 within 1e-12.
  explicit FiniteProbability(std::map<std::string, double> weights);

  const std::map<std::string, double> &weights() const noexcept { return weights_; }
  double weight(const std::string &label) const;

private:
  std::map<std::string, double> weights_;
};

/// Self-accuracy values acc_k(k): an explicit table with an optional fallback.
struct AnchorTable {
  std::map<double, double> values;
  std::optional<double> fallback = 0.0;

  static AnchorTable zero() { return {}; }
  /// Throws MissingAnchor when k has no explicit entry and no fallback is set.
  double at(double k) const;
  bool has(double k) const { return fallback.has_value() || values.count(k) > 0; }
};

/// Accuracy of an estimate x of a random variable whose true value is k, in Schervish form:
/// acc_k(x) = acc_k(k) - integral from x to k of (k - t) lambda(dt), for x and k in the hull.
///
/// `per_value` replaces the measure for individual k. A score with such overrides is
/// generally not proper; it exists to build the negative fixtures the checks must reject.
class EstimateScore {
public:
  EstimateScore(WeightMeasure measure, Interval hull, AnchorTable anchors = AnchorTable::zero(),
                std::map<double, WeightMeasure> per_value = {}, const Tolerances &tol = {});

  const WeightMeasure &measure() const noexcept { return measure_; }
  const WeightMeasure &measure_for(double k) const;
  const Interval &hull() const noexcept { return hull_; }
  const AnchorTable &anchors() const noexcept { return anchors_; }
  bool stitched() const noexcept { return !per_value_.empty(); }
  const Tolerances &tolerances() const noexcept { return tol_; }

private:
  WeightMeasure measure_;
  Interval hull_;
  AnchorTable anchors_;
  std::map<double, WeightMeasure> per_value_;
  Tolerances tol_;
};

/// Sum of p(w) V(w). Throws MismatchError on labels V does not have.
double expectation(const FiniteProbability &p, const RandomVariable &v);

/// acc_k(x). Throws DomainError when x or k leaves the hull, MissingAnchor when k has no anchor.
double score(const EstimateScore &s, double k, double x);

/// Sum of p(w) acc_{V(w)}(x) over outcomes with positive weight.
double expected_estimate_score(const EstimateScore &s, const FiniteProbability &p, const RandomVariable &v,
                               double x);

struct SimplexSampling {
  /// Random draws from the uniform simplex distribution. Defaults to 0 when the variable has
  /// at most three outcomes (a lattice is used instead) and 200 otherwise.
  std::optional<std::size_t> random_draws;
  std::uint64_t seed = 0;
};

/// Probabilities examined by the estimates propriety check.
///
/// Up to three outcomes: the simplex lattice with n_p levels per coordinate (n_p points on an
/// edge). More outcomes: every vertex and edge midpoint. Seeded uniform draws are appended.
std::vector<FiniteProbability> sample_probabilities(const RandomVariable &v, std::size_t n_p,
                                                    const SimplexSampling &sampling = {});

/// `count` seeded draws from the uniform distribution on the probability simplex over v's outcomes.
std::vector<FiniteProbability> random_probabilities(const RandomVariable &v, std::size_t count,
                                                    std::uint64_t seed);

struct EstimateProprietyReport : VerificationReport {
  /// False when atoms, zero-measure stretches or per-value measures rule out strict propriety.
  bool strict_capable = true;
  /// Worst |Exp acc(e) - Exp acc(x) - integral from x to e of (e - t) lambda(dt)|.
  double crosscheck_worst = 0.0;
};

EstimateProprietyReport check_propriety_estimates(const EstimateScore &s, const RandomVariable &v,
                                                  std::size_t n_p, const Tolerances &tol = {},
                                                  const SimplexSampling &sampling = {});

/// Two-outcome probability with expectation t: (t-k)/(r-k) on the r-outcome and
/// (r-t)/(r-k) on the k-outcome.
FiniteProbability two_point_probability(const RandomVariable &v, double k, double r, double t);

/// acc_k'(t) / (k - t) by finite differences. Throws NearSingularity when |k - t| < 10 fd_step.
double recover_mass_estimates(const EstimateScore &s, double k, double t, const Tolerances &tol = {});

/// Pairwise relative spread of recover_mass_estimates across ks at each t (threshold 1e-3).
/// Each row records whether t lies between the pair ("direct"), is reached through a third
/// value on the far side ("transitive"), or neither.
VerificationReport check_mass_k_independence(const EstimateScore &s, const std::vector<double> &ks,
                                             const std::vector<double> &ts, const Tolerances &tol = {});

/// acc_k strictly increasing below k and strictly decreasing above it on an n-point hull grid.
bool check_value_directedness(const EstimateScore &s, double k, std::size_t n);
VerificationReport value_directedness_report(const EstimateScore &s, double k, std::size_t n);

struct BregmanForm {
  Entropy entropy;
  /// Worst |acc_k(x) - acc_k(k) + divergence(phi, k, x)| on the verification grid.
  double max_residual = 0.0;
  std::size_t cases = 0;
};

/// phi with phi'' equal to the density on the hull, gauge-fixed at the midpoint.
/// Throws UnsupportedForm for atoms or per-value measures.
BregmanForm bregman_form_estimates(const EstimateScore &s, const Tolerances &tol = {});

/// |(Exp_p acc(e) - Exp_p acc(x)) - divergence(phi, e, x)| with e = Exp_p[V].
double expected_form_check(const EstimateScore &s, const RandomVariable &v, const FiniteProbability &p, double x,
                           const Tolerances &tol = {});
double expected_form_check(const EstimateScore &s, const Entropy &phi, const RandomVariable &v,
                           const FiniteProbability &p, double x);

/// Density 2 on [lo, hi], zero anchors: acc_k(x) = -(k - x)^2.
EstimateScore quadratic_estimate_score(double lo, double hi);

/// Each listed k gets its own constant density; other k use `base`. Improper unless all agree.
EstimateScore stitched_estimate_score(double lo, double hi, double base, const std::map<double, double> &per_value);

} // namespace propscore
