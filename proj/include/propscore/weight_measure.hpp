#pragma once

#include "propscore/numeric.hpp"

#include <cstddef>
#include <vector>

namespace propscore {

struct Atom {
  double location;
  double mass;
};

/// Result of an integral against a weighting measure.
struct MeasureIntegral {
  double value = 0.0;
  /// The quadrature stopped short of a domain end where the density is not finite.
  bool endpoint_truncated = false;
  /// The weighted integrand is not integrable at a truncated end; `value` is then +-inf.
  bool unbounded = false;
};

/// A measure on [lo, hi]: a non-negative density plus finitely many point masses.
///
/// The density may blow up at the two domain ends (e.g. 1/(t(1-t))). Integrals that reach
/// such an end stop 1e-9 * (hi - lo) short of it; a local power-law probe then decides
/// whether the weighted tail is unbounded. Immutable after construction.
class WeightMeasure {
public:
  /// Audits the density on 1000 interior points and validates the atoms.
  /// Throws InvalidMeasure naming the first offending point.
  WeightMeasure(Interval domain, RealFn density, std::vector<Atom> atoms = {});

  static WeightMeasure from_constant_density(double c, double lo, double hi);
  static WeightMeasure from_density(RealFn density, double lo, double hi,
                                    std::vector<Atom> atoms = {});

  const Interval &domain() const noexcept { return domain_; }
  double density(double t) const { return density_(t); }
  const RealFn &density_fn() const noexcept { return density_; }
  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  bool has_atoms() const noexcept { return !atoms_.empty(); }

  /// Signed integral from x to y of weight(t) lambda(dt).
  ///
  /// Atoms count on the half-open [min(x,y), max(x,y)); the whole result is negated when x > y.
  MeasureIntegral integral(const RealFn &weight, double x, double y,
                           const Tolerances &tol = {}) const;

  /// lambda([a, b)), the closed end included when b is the top of the domain.
  double mass_of(double a, double b, const Tolerances &tol = {}) const;

  /// Same measure with density and atom masses multiplied by c > 0.
  WeightMeasure scaled(double c) const;

private:
  Interval domain_;
  RealFn density_;
  std::vector<Atom> atoms_;
  bool singular_lo_ = false;
  bool singular_hi_ = false;
};

/// Signed moment integral from x to y of (v - t) lambda(dt).
double moment_integral(const WeightMeasure &measure, double x, double y, double v,
                       const Tolerances &tol = {});

/// moment_integral with the truncation and unboundedness flags.
MeasureIntegral moment_integral_detail(const WeightMeasure &measure, double x, double y, double v,
                                       const Tolerances &tol = {});

/// True iff each of n equal subintervals of the domain has positive measure. Requires n >= 10.
bool is_strictly_positive(const WeightMeasure &measure, std::size_t n,
                          const Tolerances &tol = {});

} // namespace propscore
