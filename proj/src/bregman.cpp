#include "propscore/bregman.hpp"

#include "propscore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace propscore {

namespace {

constexpr std::size_t kConvexityGrid = 201;
constexpr double kCurvatureRel = 1e-3;

std::string at(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

} // namespace

Entropy::Entropy(RealFn phi, RealFn dphi, std::optional<RealFn> ddphi, Interval domain,
                 const Tolerances &tol)
    : phi_(std::move(phi)), dphi_(std::move(dphi)), ddphi_(std::move(ddphi)), domain_(domain) {
  if (!(domain_.lo < domain_.hi))
    throw InvalidEntropy("entropy domain must satisfy lo < hi");
  if (!phi_ || !dphi_ || (ddphi_ && !*ddphi_))
    throw InvalidEntropy("entropy functions must be callable");
  if (!is_convex_on_grid(phi_, domain_.lo, domain_.hi, kConvexityGrid, tol))
    throw InvalidEntropy("phi fails the convexity audit");
  if (!ddphi_)
    return;

  const auto grid = linspace(domain_.lo, domain_.hi, kConvexityGrid);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double t = grid[i];
    const double dd = (*ddphi_)(t);
    if (!std::isfinite(dd) || dd < 0.0)
      throw InvalidEntropy("ddphi is negative or not finite at t = " + at(t));
    const double fd = differentiate(dphi_, t, tol, domain_);
    if (std::abs(fd - dd) > kCurvatureRel * std::max(1.0, std::abs(dd)))
      throw InvalidEntropy("ddphi disagrees with the divided differences of dphi at t = " + at(t));
  }
  curvature_ = std::make_shared<const WeightMeasure>(domain_, *ddphi_);
}

double Entropy::ddphi(double p) const {
  if (!ddphi_)
    throw UnsupportedForm("entropy has no second derivative");
  return (*ddphi_)(p);
}

double divergence(const Entropy &phi, double p, double x) {
  if (p == x)
    return 0.0;
  const double slope = phi.dphi(x);
  if (std::isinf(slope))
    return kInf;
  return phi.phi(p) - phi.phi(x) - (p - x) * slope;
}

Entropy entropy_from_measure(const WeightMeasure &measure, std::optional<double> anchor,
                             const Tolerances &tol) {
  if (measure.has_atoms())
    throw UnsupportedForm("an entropy cannot be built from a measure with atoms");
  const double a = anchor.value_or(measure.domain().midpoint());
  if (!measure.domain().contains(a))
    throw DomainError("entropy anchor outside the domain");
  auto shared = std::make_shared<const WeightMeasure>(measure);
  RealFn dphi = [shared, a, tol](double x) {
    return shared->integral([](double) { return 1.0; }, a, x, tol).value;
  };
  RealFn phi = [shared, a, tol](double x) { return moment_integral(*shared, a, x, x, tol); };
  return Entropy(std::move(phi), std::move(dphi), shared->density_fn(), measure.domain(), tol);
}

Entropy entropy_from_mass(RealFn m, double lo, double hi, std::optional<double> anchor,
                          const Tolerances &tol) {
  if (!(lo < hi))
    throw InvalidMass("mass domain must satisfy lo < hi");
  constexpr std::size_t kAudit = 1000;
  const double step = (hi - lo) / static_cast<double>(kAudit + 1);
  for (std::size_t i = 1; i <= kAudit; ++i) {
    const double t = lo + step * static_cast<double>(i);
    const double v = m(t);
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidMass("mass function is not strictly positive at t = " + at(t));
  }
  return entropy_from_measure(WeightMeasure({lo, hi}, std::move(m)), anchor, tol);
}

double mass_from_entropy(const Entropy &phi, double t, const Tolerances &tol) {
  if (phi.has_ddphi())
    return phi.ddphi(t);
  return second_difference(phi.phi_fn(), t, tol, phi.domain());
}

double check_integral_identity(const Entropy &phi, double x, double p, const Tolerances &tol) {
  if (!phi.curvature())
    throw UnsupportedForm("integral identity needs a second derivative");
  const double lhs = moment_integral(*phi.curvature(), x, p, p, tol);
  const double rhs = divergence(phi, p, x);
  if (std::isinf(lhs) && lhs == rhs)
    return 0.0;
  return std::abs(lhs - rhs);
}

} // namespace propscore
