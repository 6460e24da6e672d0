#pragma once

#include "propscore/numeric.hpp"
#include "propscore/weight_measure.hpp"

#include <memory>
#include <optional>

namespace propscore {

/// Convex generator phi of a Bregman divergence, with its first and optionally second
/// derivative.
///
/// Construction audits convexity on a 201-point grid. When the second derivative is
/// supplied it must be non-negative and agree with the divided differences of dphi to
/// 1e-3 relative. Sub-gradients are not represented: callers supply dphi. Building phi
/// from a mass function assumes that function is continuous; the audit cannot check it.
class Entropy {
public:
  Entropy(RealFn phi, RealFn dphi, std::optional<RealFn> ddphi, Interval domain,
          const Tolerances &tol = {});

  double phi(double p) const { return phi_(p); }
  double dphi(double p) const { return dphi_(p); }
  bool has_ddphi() const noexcept { return ddphi_.has_value(); }
  /// Throws UnsupportedForm when no second derivative was supplied.
  double ddphi(double p) const;

  const RealFn &phi_fn() const noexcept { return phi_; }
  const RealFn &dphi_fn() const noexcept { return dphi_; }
  const std::optional<RealFn> &ddphi_fn() const noexcept { return ddphi_; }
  const Interval &domain() const noexcept { return domain_; }

  /// ddphi viewed as a weighting measure on the domain; null without ddphi.
  const std::shared_ptr<const WeightMeasure> &curvature() const noexcept { return curvature_; }

private:
  RealFn phi_;
  RealFn dphi_;
  std::optional<RealFn> ddphi_;
  Interval domain_;
  std::shared_ptr<const WeightMeasure> curvature_;
};

/// phi(p) - phi(x) - (p - x) dphi(x); zero when p == x.
double divergence(const Entropy &phi, double p, double x);

/// The entropy whose second derivative is m, gauge-fixed by phi(anchor) = dphi(anchor) = 0.
///
/// dphi(x) is the integral of m from anchor to x and phi(x) the integral of (x - t) m(t),
/// both by quadrature. The anchor defaults to the domain midpoint. Throws InvalidMass when
/// m is not strictly positive on the 1000-point audit grid.
Entropy entropy_from_mass(RealFn m, double lo, double hi, std::optional<double> anchor = std::nullopt,
                          const Tolerances &tol = {});

/// Same, starting from an atom-free weighting measure. Throws UnsupportedForm on atoms.
Entropy entropy_from_measure(const WeightMeasure &measure, std::optional<double> anchor = std::nullopt,
                             const Tolerances &tol = {});

/// ddphi(t) when stored, otherwise the second divided difference of phi.
double mass_from_entropy(const Entropy &phi, double t, const Tolerances &tol = {});

/// |integral from x to p of (p - t) ddphi(t) dt - divergence(phi, p, x)|.
double check_integral_identity(const Entropy &phi, double x, double p, const Tolerances &tol = {});

} // namespace propscore
