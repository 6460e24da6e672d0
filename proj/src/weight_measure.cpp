#include "propscore/weight_measure.hpp"

#include "propscore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace propscore {

namespace {

constexpr std::size_t kAuditPoints = 1000;
constexpr double kShave = 1e-9;
// Local exponent a in |g(e + h)| ~ h^-a above which the tail counts as unbounded.
constexpr double kDivergentExponent = 0.95;

std::string at(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

} // namespace

WeightMeasure::WeightMeasure(Interval domain, RealFn density, std::vector<Atom> atoms)
    : domain_(domain), density_(std::move(density)), atoms_(std::move(atoms)) {
  if (!(domain_.lo < domain_.hi))
    throw InvalidMeasure("measure domain must satisfy lo < hi");
  if (!density_)
    throw InvalidMeasure("measure density is empty");
  for (const auto &a : atoms_) {
    if (!domain_.contains(a.location))
      throw InvalidMeasure("atom at " + at(a.location) + " lies outside the domain");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw InvalidMeasure("atom at " + at(a.location) + " has non-positive mass");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom &a, const Atom &b) { return a.location < b.location; });

  const double step = domain_.width() / static_cast<double>(kAuditPoints + 1);
  for (std::size_t i = 1; i <= kAuditPoints; ++i) {
    const double t = domain_.lo + step * static_cast<double>(i);
    const double d = density_(t);
    if (!std::isfinite(d))
      throw InvalidMeasure("density is not finite at t = " + at(t));
    if (d < 0.0)
      throw InvalidMeasure("density is negative at t = " + at(t));
  }
  singular_lo_ = !std::isfinite(density_(domain_.lo));
  singular_hi_ = !std::isfinite(density_(domain_.hi));
}

WeightMeasure WeightMeasure::from_constant_density(double c, double lo, double hi) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidMeasure("constant density must be positive");
  return WeightMeasure({lo, hi}, [c](double) { return c; });
}

WeightMeasure WeightMeasure::from_density(RealFn density, double lo, double hi,
                                          std::vector<Atom> atoms) {
  return WeightMeasure({lo, hi}, std::move(density), std::move(atoms));
}

WeightMeasure WeightMeasure::scaled(double c) const {
  if (!(c > 0.0))
    throw InvalidMeasure("scale factor must be positive");
  auto atoms = atoms_;
  for (auto &a : atoms)
    a.mass *= c;
  return WeightMeasure(domain_, [d = density_, c](double t) { return c * d(t); }, std::move(atoms));
}

MeasureIntegral WeightMeasure::integral(const RealFn &weight, double x, double y,
                                        const Tolerances &tol) const {
  if (!domain_.contains(x) || !domain_.contains(y))
    throw DomainError("integration bounds outside the measure domain [" + at(domain_.lo) + ", " +
                      at(domain_.hi) + "]");
  MeasureIntegral out;
  if (x == y)
    return out;
  const double sign = x < y ? 1.0 : -1.0;
  double lo = std::min(x, y);
  double hi = std::max(x, y);

  const auto g = [&](double t) { return weight(t) * density_(t); };
  const double eps = kShave * domain_.width();

  // Probe an end e approached from direction dir (+1 from above, -1 from below).
  const auto tail = [&](double e, double dir) -> std::optional<double> {
    const double near = std::abs(g(e + dir * eps));
    const double far = std::abs(g(e + dir * 1e3 * eps));
    if (!(near > 0.0) || !std::isfinite(far) || far == 0.0)
      return std::nullopt;
    const double exponent = std::log(near / far) / std::log(1e3);
    if (exponent < kDivergentExponent)
      return std::nullopt;
    return std::copysign(kInf, g(e + dir * eps));
  };

  double edge = 0.0;
  if (lo == domain_.lo && singular_lo_) {
    out.endpoint_truncated = true;
    if (auto inf = tail(lo, 1.0)) {
      out.unbounded = true;
      edge += *inf;
    }
    lo += eps;
  }
  if (hi == domain_.hi && singular_hi_) {
    out.endpoint_truncated = true;
    if (auto inf = tail(hi, -1.0)) {
      out.unbounded = true;
      edge += *inf;
    }
    hi -= eps;
  }

  double value = 0.0;
  if (out.unbounded) {
    value = edge;
  } else {
    if (lo < hi)
      value = integrate(g, lo, hi, tol);
    for (const auto &a : atoms_)
      if (std::min(x, y) <= a.location && a.location < std::max(x, y))
        value += weight(a.location) * a.mass;
  }
  out.value = sign * value;
  return out;
}

double WeightMeasure::mass_of(double a, double b, const Tolerances &tol) const {
  if (!(a < b))
    return 0.0;
  double m = integral([](double) { return 1.0; }, a, b, tol).value;
  if (b == domain_.hi)
    for (const auto &atom : atoms_)
      if (atom.location == b)
        m += atom.mass;
  return m;
}

MeasureIntegral moment_integral_detail(const WeightMeasure &measure, double x, double y, double v,
                                       const Tolerances &tol) {
  return measure.integral([v](double t) { return v - t; }, x, y, tol);
}

double moment_integral(const WeightMeasure &measure, double x, double y, double v,
                       const Tolerances &tol) {
  return moment_integral_detail(measure, x, y, v, tol).value;
}

bool is_strictly_positive(const WeightMeasure &measure, std::size_t n, const Tolerances &tol) {
  if (n < 10)
    throw std::invalid_argument("is_strictly_positive: n must be at least 10");
  const auto edges = linspace(measure.domain().lo, measure.domain().hi, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    if (!(measure.mass_of(edges[i], edges[i + 1], tol) > 0.0))
      return false;
  return true;
}

} // namespace propscore
