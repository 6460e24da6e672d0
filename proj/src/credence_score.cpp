#include "propscore/credence_score.hpp"

#include "propscore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace propscore {

namespace {

constexpr Interval kUnit{0.0, 1.0};
constexpr double kMassConsistency = 1e-3;
constexpr double kKinkRel = 1e-2;

void require_unit(double x, const char *what) {
  if (!kUnit.contains(x))
    throw DomainError(std::string(what) + " must lie in [0, 1]");
}

double relative(double observed, double expected) {
  return std::abs(observed - expected) / std::max(std::abs(expected), 1e-300);
}

std::vector<double> interior_grid(std::size_t n) {
  std::vector<double> ts;
  ts.reserve(n);
  for (std::size_t i = 1; i <= n; ++i)
    ts.push_back(static_cast<double>(i) / static_cast<double>(n + 1));
  return ts;
}

} // namespace

CredenceScore::CredenceScore(RealFn acc0, RealFn acc1, double anchor0, double anchor1,
                             std::shared_ptr<const WeightMeasure> measure,
                             std::shared_ptr<const Entropy> entropy)
    : acc0_(std::move(acc0)), acc1_(std::move(acc1)), anchor0_(anchor0), anchor1_(anchor1),
      measure_(std::move(measure)), entropy_(std::move(entropy)) {
  if (!acc0_ || !acc1_)
    throw Error("credence score functions must be callable");
  if (std::isnan(anchor0_) || std::isnan(anchor1_) || anchor0_ == kInf || anchor1_ == kInf)
    throw Error("credence score anchors must be finite or -inf");
}

CredenceScore CredenceScore::from_functions(RealFn acc0, RealFn acc1) {
  const double a0 = acc0(0.0);
  const double a1 = acc1(1.0);
  return CredenceScore(std::move(acc0), std::move(acc1), a0, a1);
}

double CredenceScore::checked(const RealFn &f, double x, const char *name) const {
  const double v = f(x);
  if (std::isfinite(v))
    return v;
  if (v == -kInf && (x == 0.0 || x == 1.0))
    return v;
  throw EvaluationError(x, v, name);
}

double CredenceScore::acc0(double x) const {
  require_unit(x, "credence");
  return x == 0.0 ? anchor0_ : checked(acc0_, x, "acc0");
}

double CredenceScore::acc1(double x) const {
  require_unit(x, "credence");
  return x == 1.0 ? anchor1_ : checked(acc1_, x, "acc1");
}

double CredenceScore::acc(int v, double x) const {
  if (v == 0)
    return acc0(x);
  if (v == 1)
    return acc1(x);
  throw DomainError("truth value must be 0 or 1");
}

CredenceScore from_measure(const WeightMeasure &measure, double anchor0, double anchor1,
                           const Tolerances &tol) {
  if (measure.domain().lo != 0.0 || measure.domain().hi != 1.0)
    throw DomainError("credence scores need a measure on [0, 1]");
  auto shared = std::make_shared<const WeightMeasure>(measure);
  RealFn acc0 = [shared, anchor0, tol](double x) {
    return anchor0 - moment_integral(*shared, x, 0.0, 0.0, tol);
  };
  RealFn acc1 = [shared, anchor1, tol](double x) {
    return anchor1 - moment_integral(*shared, x, 1.0, 1.0, tol);
  };
  return CredenceScore(std::move(acc0), std::move(acc1), anchor0, anchor1, shared);
}

CredenceScore from_entropy(const Entropy &phi) {
  if (phi.domain().lo != 0.0 || phi.domain().hi != 1.0)
    throw DomainError("credence scores need an entropy on [0, 1]");
  auto shared = std::make_shared<const Entropy>(phi);
  const auto make = [shared](double v) {
    return [shared, v](double x) {
      return shared->phi(x) + (v - x) * shared->dphi(x);
    };
  };
  return CredenceScore(make(0.0), make(1.0), phi.phi(0.0), phi.phi(1.0), shared->curvature(), shared);
}

double expected_score(const CredenceScore &s, double p, double x) {
  require_unit(p, "probability");
  double total = 0.0;
  if (p > 0.0)
    total += p * s.acc1(x);
  if (p < 1.0)
    total += (1.0 - p) * s.acc0(x);
  return total;
}

Entropy entropy_of(const CredenceScore &s) {
  RealFn phi = [s](double p) { return expected_score(s, p, p); };
  RealFn dphi = [s](double p) { return s.acc1(p) - s.acc0(p); };
  return Entropy(std::move(phi), std::move(dphi), std::nullopt, kUnit);
}

MassRecovery recover_mass(const CredenceScore &s, double t, const Tolerances &tol) {
  if (!(0.0 < t && t < 1.0))
    throw DomainError("recover_mass: t must lie in (0, 1)");
  const RealFn a0 = [&s](double x) { return s.acc0(x); };
  const RealFn a1 = [&s](double x) { return s.acc1(x); };

  MassRecovery out;
  out.mass = differentiate(a0, t, tol, kUnit) / (-t);
  out.from_acc1 = differentiate(a1, t, tol, kUnit) / (1.0 - t);
  const double scale = std::max({std::abs(out.mass), std::abs(out.from_acc1), 1e-300});
  out.discrepancy = std::abs(out.mass - out.from_acc1) / scale;
  out.consistent = out.discrepancy <= kMassConsistency;

  const double h = tol.fd_step;
  if (t - h > 0.0 && t + h < 1.0) {
    const double fwd = (s.acc0(t + h) - s.acc0(t)) / h;
    const double bwd = (s.acc0(t) - s.acc0(t - h)) / h;
    const double mag = std::max({std::abs(fwd), std::abs(bwd), 1e-12});
    out.smooth = std::abs(fwd - bwd) <= kKinkRel * mag;
  }
  if (!out.consistent)
    out.warning = "acc0'(t)/-t and acc1'(t)/(1-t) disagree: score is not proper or not smooth";
  if (!out.smooth)
    out.warning += std::string(out.warning.empty() ? "" : "; ") + "acc0 has a kink at t";
  return out;
}

VerificationReport check_propriety(const CredenceScore &s, std::size_t n_p, const Tolerances &tol) {
  if (n_p < 3)
    throw std::invalid_argument("check_propriety: n_p must be at least 3");
  VerificationReport report;
  report.check = "propriety";
  report.threshold = tol.argmax_tol;
  report.grid_sizes = {{"n_p", n_p}};
  for (double p : interior_grid(n_p)) {
    const double best = argmax_1d([&](double x) { return expected_score(s, p, x); }, 0.0, 1.0, tol);
    report.add({{{"p", p}}, best, p, std::abs(best - p)});
  }
  report.finalize();
  return report;
}

VerificationReport truth_directedness_report(const CredenceScore &s, std::size_t n) {
  if (n < 3)
    throw std::invalid_argument("truth-directedness: n must be at least 3");
  VerificationReport report;
  report.check = "truth-directedness";
  report.threshold = 0.0;
  report.grid_sizes = {{"n", n}};
  const auto xs = linspace(0.0, 1.0, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x = xs[i], y = xs[i + 1];
    const double a1x = s.acc1(x), a1y = s.acc1(y);
    const double a0x = s.acc0(x), a0y = s.acc0(y);
    // Non-negative margin means the strict monotonicity fails between x and y.
    report.add({{{"v", 1}, {"x", x}, {"y", y}}, a1y, a1x, a1x - a1y});
    report.add({{{"v", 0}, {"x", x}, {"y", y}}, a0y, a0x, a0y - a0x});
  }
  report.finalize();
  return report;
}

bool check_truth_directedness(const CredenceScore &s, std::size_t n) {
  return truth_directedness_report(s, n).pass;
}

double check_stationarity(const CredenceScore &s, double t, const Tolerances &tol) {
  if (!(0.0 < t && t < 1.0))
    throw DomainError("check_stationarity: t must lie in (0, 1)");
  const RealFn a0 = [&s](double x) { return s.acc0(x); };
  const RealFn a1 = [&s](double x) { return s.acc1(x); };
  const double d1 = differentiate(a1, t, tol, kUnit);
  const double d0 = differentiate(a0, t, tol, kUnit);
  return std::abs(t * d1 + (1.0 - t) * d0);
}

VerificationReport stationarity_report(const CredenceScore &s, std::size_t n, double threshold,
                                       const Tolerances &tol) {
  VerificationReport report;
  report.check = "stationarity";
  report.threshold = threshold;
  report.grid_sizes = {{"n", n}};
  for (double t : interior_grid(n)) {
    const double r = check_stationarity(s, t, tol);
    report.add({{{"t", t}}, r, 0.0, r});
    const auto m = recover_mass(s, t, tol);
    if (!m.smooth)
      report.notes.push_back("kink detected near t = " + format_real(t, 6));
  }
  report.finalize();
  return report;
}

double score_difference(const CredenceScore &s, int v, double x, double y) {
  if (x == y)
    return 0.0;
  return s.acc(v, y) - s.acc(v, x);
}

VerificationReport equivalence_report(const CredenceScore &s, const WeightMeasure &measure, std::size_t n,
                                      double threshold, const Tolerances &tol) {
  VerificationReport report;
  report.check = "schervish-equivalences";
  report.threshold = threshold;
  report.grid_sizes = {{"x", n}, {"y", n}, {"p", n}};
  const auto grid = linspace(0.0, 1.0, n);
  std::size_t skipped = 0;
  const auto add = [&](std::vector<std::pair<std::string, double>> in, double observed, double expected) {
    if (!std::isfinite(observed) || !std::isfinite(expected)) {
      ++skipped;
      return;
    }
    report.add({std::move(in), observed, expected, std::abs(observed - expected)});
  };

  for (int v = 0; v <= 1; ++v) {
    const double vv = v;
    for (double x : grid) {
      add({{"identity", 1}, {"v", vv}, {"x", x}}, s.acc(v, v) - s.acc(v, x),
          moment_integral(measure, x, vv, vv, tol));
      for (double y : grid)
        add({{"identity", 2}, {"v", vv}, {"x", x}, {"y", y}}, score_difference(s, v, x, y),
            moment_integral(measure, x, y, vv, tol));
    }
  }
  for (double p : grid)
    for (double x : grid)
      add({{"identity", 3}, {"p", p}, {"x", x}}, expected_score(s, p, p) - expected_score(s, p, x),
          moment_integral(measure, x, p, p, tol));
  if (skipped > 0)
    report.notes.push_back(std::to_string(skipped) + " cases with infinite values skipped");
  report.finalize();
  return report;
}

VerificationReport mass_roundtrip_report(const CredenceScore &s, const WeightMeasure &measure, std::size_t n,
                                         double threshold, const Tolerances &tol) {
  VerificationReport report;
  report.check = "mass-roundtrip";
  report.threshold = threshold;
  report.grid_sizes = {{"n", n}};
  for (double t : interior_grid(n)) {
    const auto m = recover_mass(s, t, tol);
    const double expected = measure.density(t);
    report.add({{{"t", t}}, m.mass, expected, relative(m.mass, expected)});
    if (!m.warning.empty())
      report.notes.push_back("t = " + format_real(t, 6) + ": " + m.warning);
  }
  report.finalize();
  return report;
}

VerificationReport entropy_link_report(const CredenceScore &s, std::size_t n, double threshold,
                                       const Tolerances &tol) {
  VerificationReport report;
  report.check = "entropy-curvature";
  report.threshold = threshold;
  report.grid_sizes = {{"n", n}};
  const Entropy phi = entropy_of(s);
  for (double t : interior_grid(n)) {
    const double observed = mass_from_entropy(phi, t, tol);
    const double expected = s.measure() ? s.measure()->density(t) : recover_mass(s, t, tol).mass;
    report.add({{{"t", t}}, observed, expected, relative(observed, expected)});
  }
  report.finalize();
  return report;
}

CredenceScore brier() {
  auto lambda = std::make_shared<const WeightMeasure>(WeightMeasure::from_constant_density(2.0, 0.0, 1.0));
  return CredenceScore([](double x) { return -x * x; },
                       [](double x) { return -(1.0 - x) * (1.0 - x); }, 0.0, 0.0, lambda);
}

CredenceScore log_score() {
  auto lambda = std::make_shared<const WeightMeasure>(
      WeightMeasure::from_density([](double t) { return 1.0 / (t * (1.0 - t)); }, 0.0, 1.0));
  return CredenceScore([](double x) { return std::log1p(-x); }, [](double x) { return std::log(x); }, 0.0,
                       0.0, lambda);
}

CredenceScore improper_linear_score() {
  return CredenceScore([](double x) { return x; }, [](double x) { return x; }, 0.0, 1.0);
}

CredenceScore antisymmetric_linear_score() {
  return CredenceScore([](double x) { return -x; }, [](double x) { return x; }, 0.0, 1.0);
}

} // namespace propscore
