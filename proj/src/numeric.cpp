#include "propscore/numeric.hpp"

#include "propscore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace propscore {

void Tolerances::validate() const {
  if (!(quad_rel > 0 && quad_abs > 0 && fd_step > 0 && argmax_tol > 0))
    throw std::invalid_argument("tolerances must be strictly positive");
  if (!(fd_step < 1e-2))
    throw std::invalid_argument("fd_step must be below 1e-2");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> xs;
  if (n == 0)
    return xs;
  if (n == 1)
    return {lo};
  xs.reserve(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    xs.push_back(lo + step * static_cast<double>(i));
  xs.push_back(hi);
  return xs;
}

namespace {

constexpr int kMaxDepth = 60;
constexpr int kInitialPanels = 8;

struct Simpson {
  const RealFn &f;

  double eval(double t) const {
    const double v = f(t);
    if (!std::isfinite(v))
      throw EvaluationError(t, v, "quadrature");
    return v;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double eps, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    if (!(a < lm && lm < m && m < rm && rm < b))
      return whole;
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= kMaxDepth || std::abs(delta) <= 15.0 * eps)
      return left + right + delta / 15.0;
    return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }
};

} // namespace

double integrate(const RealFn &f, double a, double b, const Tolerances &tol) {
  if (a == b)
    return 0.0;
  if (a > b)
    return -integrate(f, b, a, tol);

  const Simpson rule{f};
  const double h = (b - a) / kInitialPanels;

  // One pass of composite Simpson fixes the scale the relative tolerance refers to.
  struct Panel {
    double a, b, fa, fm, fb, whole;
  };
  std::vector<Panel> panels;
  panels.reserve(kInitialPanels);
  double scale = 0.0;
  double fa = rule.eval(a);
  for (int i = 0; i < kInitialPanels; ++i) {
    const double pa = a + h * i;
    const double pb = (i + 1 == kInitialPanels) ? b : a + h * (i + 1);
    const double fm = rule.eval(0.5 * (pa + pb));
    const double fb = rule.eval(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    scale += (pb - pa) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
    panels.push_back({pa, pb, fa, fm, fb, whole});
    fa = fb;
  }

  const double eps = std::max(tol.quad_abs, tol.quad_rel * scale) / kInitialPanels;
  double sum = 0.0;
  for (const auto &p : panels)
    sum += rule.refine(p.a, p.b, p.fa, p.fm, p.fb, p.whole, eps, 0);
  return sum;
}

double differentiate(const RealFn &f, double t, const Tolerances &tol,
                     std::optional<Interval> domain) {
  const double h = tol.fd_step;
  if (domain) {
    if (!domain->contains(t))
      throw DomainError("differentiate: t outside the function's domain");
    if (t - h < domain->lo)
      return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
    if (t + h > domain->hi)
      return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
  }
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

double second_difference(const RealFn &f, double t, const Tolerances &tol,
                         std::optional<Interval> domain) {
  double h = std::sqrt(tol.fd_step);
  if (domain) {
    if (!(domain->lo < t && t < domain->hi))
      throw DomainError("second_difference: t must be interior to the domain");
    h = std::min({h, 0.5 * (t - domain->lo), 0.5 * (domain->hi - t)});
  }
  const double ft = f(t);
  const auto stencil = [&](double step) { return (f(t + step) - 2.0 * ft + f(t - step)) / (step * step); };
  // Richardson: the h^2 error terms of the two stencils cancel.
  return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

namespace {

double checked(const RealFn &f, double x) {
  const double v = f(x);
  if (std::isnan(v))
    throw EvaluationError(x, v, "argmax_1d");
  return v;
}

} // namespace

double argmax_1d(const RealFn &f, double lo, double hi, const Tolerances &tol) {
  if (!(lo < hi))
    throw DomainError("argmax_1d: requires lo < hi");

  constexpr std::size_t kGrid = 201;
  const auto grid = linspace(lo, hi, kGrid);
  std::vector<double> values(kGrid);
  std::size_t best = 0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    values[i] = checked(f, grid[i]);
    if (values[i] > values[best])
      best = i;
  }
  if (values[best] == -kInf)
    return grid[best];

  // Golden-section refinement inside the two cells adjacent to the grid winner.
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 == kGrid ? best : best + 1];
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = checked(f, c);
  double fd = checked(f, d);
  const double stop = 1e-3 * tol.argmax_tol;
  for (int iter = 0; iter < 200 && (b - a) > stop; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = checked(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = checked(f, d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double f_refined = checked(f, refined);
  if (f_refined > values[best])
    return refined;
  if (f_refined == values[best])
    return std::min(refined, grid[best]);
  return grid[best];
}

bool is_convex_on_grid(const RealFn &f, double lo, double hi, std::size_t n,
                       const Tolerances &tol) {
  if (n < 3)
    throw std::invalid_argument("is_convex_on_grid: n must be at least 3");
  const auto xs = linspace(lo, hi, n);
  std::vector<double> fs(n);
  for (std::size_t i = 0; i < n; ++i)
    fs[i] = f(xs[i]);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  constexpr double kRound = 8.0 * std::numeric_limits<double>::epsilon();
  // Abscissa rounding perturbs values near a zero crossing by the scale of f, not of f(x).
  double scale = 0.0;
  for (double v : fs)
    if (std::isfinite(v))
      scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double l = fs[i - 1], m = fs[i], r = fs[i + 1];
    if (!std::isfinite(l) || !std::isfinite(m) || !std::isfinite(r))
      continue;
    const double dd = (l - 2.0 * m + r) / (h * h);
    const double slack = kRound * (std::abs(l) + 2.0 * std::abs(m) + std::abs(r) + scale) / (h * h);
    if (dd < -(tol.quad_abs + slack))
      return false;
  }
  return true;
}

} // namespace propscore
