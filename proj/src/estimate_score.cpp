#include "propscore/estimate_score.hpp"

#include "propscore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

namespace propscore {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kKIndependence = 1e-3;
constexpr double kCrosscheckGrid = 5;

std::string at(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

} // namespace

RandomVariable::RandomVariable(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  std::set<std::string> labels;
  std::set<double> values;
  for (const auto &o : outcomes_) {
    if (!labels.insert(o.label).second)
      throw InvalidVariable("duplicate outcome label '" + o.label + "'");
    if (!std::isfinite(o.value))
      throw InvalidVariable("outcome '" + o.label + "' has a non-finite value");
    values.insert(o.value);
  }
  if (values.size() < 2)
    throw InvalidVariable("a random variable needs at least two distinct values");
  hull_ = {*values.begin(), *values.rbegin()};
}

std::vector<double> RandomVariable::values() const {
  std::set<double> values;
  for (const auto &o : outcomes_)
    values.insert(o.value);
  return {values.begin(), values.end()};
}

double RandomVariable::value_of(const std::string &label) const {
  for (const auto &o : outcomes_)
    if (o.label == label)
      return o.value;
  throw MismatchError("unknown outcome label '" + label + "'");
}

std::optional<std::string> RandomVariable::label_with_value(double v) const {
  for (const auto &o : outcomes_)
    if (o.value == v)
      return o.label;
  return std::nullopt;
}

FiniteProbability::FiniteProbability(std::map<std::string, double> weights) : weights_(std::move(weights)) {
  double sum = 0.0;
  for (const auto &[label, w] : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidProbability("weight of '" + label + "' must be a finite non-negative number");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InvalidProbability("weights sum to " + at(sum) + ", not 1");
}

double FiniteProbability::weight(const std::string &label) const {
  const auto it = weights_.find(label);
  return it == weights_.end() ? 0.0 : it->second;
}

double AnchorTable::at(double k) const {
  if (const auto it = values.find(k); it != values.end())
    return it->second;
  if (fallback)
    return *fallback;
  throw MissingAnchor("no self-accuracy anchor for k = " + propscore::at(k));
}

EstimateScore::EstimateScore(WeightMeasure measure, Interval hull, AnchorTable anchors,
                             std::map<double, WeightMeasure> per_value, const Tolerances &tol)
    : measure_(std::move(measure)), hull_(hull), anchors_(std::move(anchors)), per_value_(std::move(per_value)),
      tol_(tol) {
  if (!(hull_.lo < hull_.hi))
    throw DomainError("estimate hull must satisfy lo < hi");
  const auto covers = [this](const WeightMeasure &m) {
    return m.domain().lo <= hull_.lo && hull_.hi <= m.domain().hi;
  };
  if (!covers(measure_))
    throw DomainError("the measure domain must contain the hull");
  for (const auto &[k, m] : per_value_) {
    if (!hull_.contains(k))
      throw DomainError("per-value measure for k = " + at(k) + " outside the hull");
    if (!covers(m))
      throw DomainError("per-value measure for k = " + at(k) + " does not cover the hull");
  }
  for (const auto &[k, a] : anchors_.values)
    if (!hull_.contains(k))
      throw DomainError("anchor for k = " + at(k) + " outside the hull");
  tol_.validate();
}

const WeightMeasure &EstimateScore::measure_for(double k) const {
  const auto it = per_value_.find(k);
  return it == per_value_.end() ? measure_ : it->second;
}

double expectation(const FiniteProbability &p, const RandomVariable &v) {
  double e = 0.0;
  for (const auto &[label, w] : p.weights())
    e += w * v.value_of(label);
  return e;
}

double score(const EstimateScore &s, double k, double x) {
  if (!s.hull().contains(x))
    throw DomainError("estimate x = " + at(x) + " outside the hull");
  if (!s.hull().contains(k))
    throw DomainError("value k = " + at(k) + " outside the hull");
  const double anchor = s.anchors().at(k);
  if (x == k)
    return anchor;
  return anchor - moment_integral(s.measure_for(k), x, k, k, s.tolerances());
}

double expected_estimate_score(const EstimateScore &s, const FiniteProbability &p, const RandomVariable &v,
                               double x) {
  double total = 0.0;
  for (const auto &[label, w] : p.weights()) {
    const double k = v.value_of(label);
    if (w > 0.0)
      total += w * score(s, k, x);
  }
  return total;
}

std::vector<FiniteProbability> sample_probabilities(const RandomVariable &v, std::size_t n_p,
                                                    const SimplexSampling &sampling) {
  if (n_p < 3)
    throw std::invalid_argument("sample_probabilities: n_p must be at least 3");
  const auto &outs = v.outcomes();
  const std::size_t n = outs.size();
  std::vector<FiniteProbability> samples;

  const auto point_mass = [&](std::size_t i) { return FiniteProbability({{outs[i].label, 1.0}}); };

  if (n == 2) {
    for (std::size_t i = 0; i < n_p; ++i) {
      const double w = static_cast<double>(i) / static_cast<double>(n_p - 1);
      samples.emplace_back(std::map<std::string, double>{{outs[0].label, 1.0 - w}, {outs[1].label, w}});
    }
  } else if (n == 3) {
    const std::size_t levels = n_p - 1;
    const double step = 1.0 / static_cast<double>(levels);
    for (std::size_t i = 0; i <= levels; ++i)
      for (std::size_t j = 0; i + j <= levels; ++j) {
        const double a = step * static_cast<double>(i);
        const double b = step * static_cast<double>(j);
        const double c = step * static_cast<double>(levels - i - j);
        samples.emplace_back(
            std::map<std::string, double>{{outs[0].label, a}, {outs[1].label, b}, {outs[2].label, c}});
      }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      samples.push_back(point_mass(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        samples.emplace_back(std::map<std::string, double>{{outs[i].label, 0.5}, {outs[j].label, 0.5}});
  }

  const std::size_t draws = sampling.random_draws.value_or(n <= 3 ? 0 : 200);
  for (auto &p : random_probabilities(v, draws, sampling.seed))
    samples.push_back(std::move(p));
  return samples;
}

std::vector<FiniteProbability> random_probabilities(const RandomVariable &v, std::size_t count,
                                                    std::uint64_t seed) {
  const auto &outs = v.outcomes();
  const std::size_t n = outs.size();
  std::vector<FiniteProbability> samples;
  samples.reserve(count);
  // Normalised unit exponentials are uniform on the simplex. The uniform variate is built
  // from raw engine bits so the stream is identical across standard libraries.
  std::mt19937_64 gen(seed);
  std::vector<double> e(n);
  for (std::size_t d = 0; d < count; ++d) {
    double sum = 0.0;
    for (auto &x : e) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      x = -std::log1p(-u);
      sum += x;
    }
    std::map<std::string, double> w;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      w[outs[i].label] = e[i] / sum;
      acc += e[i] / sum;
    }
    w[outs[n - 1].label] = std::max(0.0, 1.0 - acc);
    samples.emplace_back(std::move(w));
  }
  return samples;
}

EstimateProprietyReport check_propriety_estimates(const EstimateScore &s, const RandomVariable &v,
                                                  std::size_t n_p, const Tolerances &tol,
                                                  const SimplexSampling &sampling) {
  EstimateProprietyReport report;
  report.check = "propriety-estimates";
  report.threshold = tol.argmax_tol;

  const auto &lambda = s.measure();
  if (lambda.has_atoms()) {
    report.strict_capable = false;
    report.notes.push_back("measure has atoms: strict propriety is not guaranteed near atom locations");
  }
  if (!is_strictly_positive(lambda, 100, tol)) {
    report.strict_capable = false;
    report.notes.push_back("measure gives zero mass to part of the domain: propriety can be at most non-strict");
  }
  if (s.stitched()) {
    report.strict_capable = false;
    report.notes.push_back("per-value measures: the score is not in Schervish form");
  }

  const auto samples = sample_probabilities(v, n_p, sampling);
  report.grid_sizes = {{"n_p", n_p}, {"samples", samples.size()}, {"outcomes", v.outcomes().size()}};
  const Interval hull = s.hull();
  const auto xs = linspace(hull.lo, hull.hi, static_cast<std::size_t>(kCrosscheckGrid));

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto &p = samples[i];
    const double e = expectation(p, v);
    const auto f = [&](double x) { return expected_estimate_score(s, p, v, x); };
    const double best = argmax_1d(f, hull.lo, hull.hi, tol);
    report.add({{{"sample", static_cast<double>(i)}, {"e", e}}, best, e, std::abs(best - e)});

    const double at_e = f(e);
    for (double x : xs) {
      const double lhs = at_e - f(x);
      const double rhs = moment_integral(lambda, x, e, e, tol);
      const double r = std::abs(lhs - rhs);
      report.crosscheck_worst = std::max(report.crosscheck_worst, std::isnan(r) ? kInf : r);
    }
  }
  report.metrics.push_back({"integral-crosscheck-worst", report.crosscheck_worst});
  report.metrics.push_back({"strict-capable", report.strict_capable ? 1.0 : 0.0});
  report.finalize();
  return report;
}

FiniteProbability two_point_probability(const RandomVariable &v, double k, double r, double t) {
  if (k == r)
    throw DomainError("two-point probability needs k != r");
  const auto lk = v.label_with_value(k);
  const auto lr = v.label_with_value(r);
  if (!lk || !lr)
    throw DomainError("k and r must both be values of the random variable");
  if (!(std::min(k, r) <= t && t <= std::max(k, r)))
    throw DomainError("t = " + at(t) + " lies outside [min(k,r), max(k,r)]");
  return FiniteProbability({{*lr, (t - k) / (r - k)}, {*lk, (r - t) / (r - k)}});
}

double recover_mass_estimates(const EstimateScore &s, double k, double t, const Tolerances &tol) {
  if (!(s.hull().lo < t && t < s.hull().hi))
    throw DomainError("t = " + at(t) + " must be interior to the hull");
  if (std::abs(k - t) < 10.0 * tol.fd_step)
    throw NearSingularity("t = " + at(t) + " too close to k = " + at(k) + "; use another k");
  const RealFn acc_k = [&](double x) { return score(s, k, x); };
  return differentiate(acc_k, t, tol, s.hull()) / (k - t);
}

VerificationReport check_mass_k_independence(const EstimateScore &s, const std::vector<double> &ks,
                                             const std::vector<double> &ts, const Tolerances &tol) {
  VerificationReport report;
  report.check = "mass-k-independence";
  report.threshold = kKIndependence;
  report.grid_sizes = {{"ks", ks.size()}, {"ts", ts.size()}};
  if (ks.size() < 2)
    report.notes.push_back("single source value: nothing to compare");

  std::size_t transitive = 0, uncovered = 0, skipped = 0;
  for (double t : ts) {
    std::vector<std::pair<double, double>> masses;
    for (double k : ks) {
      if (std::abs(k - t) < 10.0 * tol.fd_step) {
        ++skipped;
        continue;
      }
      masses.emplace_back(k, recover_mass_estimates(s, k, t, tol));
    }
    for (std::size_t a = 0; a < masses.size(); ++a)
      for (std::size_t b = a + 1; b < masses.size(); ++b) {
        const auto [k, mk] = masses[a];
        const auto [r, mr] = masses[b];
        const double lo = std::min(k, r), hi = std::max(k, r);
        double path = 0.0;
        if (t < lo || t > hi) {
          const bool via = std::any_of(ks.begin(), ks.end(),
                                       [&](double w) { return t < lo ? w <= t : w >= t; });
          path = via ? 1.0 : 2.0;
          ++(via ? transitive : uncovered);
        }
        const double scale = std::max({std::abs(mk), std::abs(mr), 1e-300});
        report.add({{{"t", t}, {"k", k}, {"r", r}, {"path", path}}, mk, mr, std::abs(mk - mr) / scale});
      }
  }
  report.metrics.push_back({"transitive-pairs", static_cast<double>(transitive)});
  report.metrics.push_back({"uncovered-pairs", static_cast<double>(uncovered)});
  if (skipped > 0)
    report.notes.push_back(std::to_string(skipped) + " (k, t) cases skipped as near-singular");
  report.finalize();
  return report;
}

VerificationReport value_directedness_report(const EstimateScore &s, double k, std::size_t n) {
  if (n < 3)
    throw std::invalid_argument("value-directedness: n must be at least 3");
  VerificationReport report;
  report.check = "value-directedness";
  report.threshold = 0.0;
  report.grid_sizes = {{"n", n}};
  auto xs = linspace(s.hull().lo, s.hull().hi, n);
  xs.push_back(k);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x = xs[i], y = xs[i + 1];
    const double ax = score(s, k, x), ay = score(s, k, y);
    // Below k accuracy must rise towards k, above it must fall away from k.
    const double margin = y <= k ? ax - ay : ay - ax;
    report.add({{{"k", k}, {"x", x}, {"y", y}}, ay, ax, margin});
  }
  report.finalize();
  return report;
}

bool check_value_directedness(const EstimateScore &s, double k, std::size_t n) {
  return value_directedness_report(s, k, n).pass;
}

BregmanForm bregman_form_estimates(const EstimateScore &s, const Tolerances &tol) {
  if (s.measure().has_atoms())
    throw UnsupportedForm("Bregman form needs an atom-free measure");
  if (s.stitched())
    throw UnsupportedForm("Bregman form needs a single measure for every value");
  const Interval hull = s.hull();
  BregmanForm out{entropy_from_mass(s.measure().density_fn(), hull.lo, hull.hi, std::nullopt, tol), 0.0, 0};

  std::vector<double> ks;
  for (const auto &[k, a] : s.anchors().values)
    ks.push_back(k);
  if (s.anchors().fallback)
    for (double k : linspace(hull.lo, hull.hi, 11))
      ks.push_back(k);
  for (double k : ks)
    for (double x : linspace(hull.lo, hull.hi, 21)) {
      const double lhs = score(s, k, x) - s.anchors().at(k);
      const double rhs = -divergence(out.entropy, k, x);
      const double r = (std::isinf(lhs) && lhs == rhs) ? 0.0 : std::abs(lhs - rhs);
      out.max_residual = std::max(out.max_residual, std::isnan(r) ? kInf : r);
      ++out.cases;
    }
  return out;
}

double expected_form_check(const EstimateScore &s, const Entropy &phi, const RandomVariable &v,
                           const FiniteProbability &p, double x) {
  const double e = expectation(p, v);
  const double lhs = expected_estimate_score(s, p, v, e) - expected_estimate_score(s, p, v, x);
  const double rhs = divergence(phi, e, x);
  if (std::isinf(lhs) && lhs == rhs)
    return 0.0;
  return std::abs(lhs - rhs);
}

double expected_form_check(const EstimateScore &s, const RandomVariable &v, const FiniteProbability &p, double x,
                           const Tolerances &tol) {
  return expected_form_check(s, bregman_form_estimates(s, tol).entropy, v, p, x);
}

EstimateScore quadratic_estimate_score(double lo, double hi) {
  return EstimateScore(WeightMeasure::from_constant_density(2.0, lo, hi), {lo, hi});
}

EstimateScore stitched_estimate_score(double lo, double hi, double base, const std::map<double, double> &per_value) {
  std::map<double, WeightMeasure> measures;
  for (const auto &[k, c] : per_value)
    measures.emplace(k, WeightMeasure::from_constant_density(c, lo, hi));
  return EstimateScore(WeightMeasure::from_constant_density(base, lo, hi), {lo, hi}, AnchorTable::zero(),
                       std::move(measures));
}

} // namespace propscore
