// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "propscore/cli.hpp"
#include "propscore/credence_score.hpp"
#include "propscore/estimate_score.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace propscore;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *name, const std::function<Verdict()> &body) {
  Verdict o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass)
    ++failures;
  std::printf("AC%-2d %s  %-34s %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double worst_abs(double acc, double v) { return std::isnan(v) ? INFINITY : std::max(acc, std::abs(v)); }

WeightMeasure density(RealFn f, double lo = 0.0, double hi = 1.0) { return WeightMeasure::from_density(f, lo, hi); }

RandomVariable three_values() { return RandomVariable({{"low", 0.0}, {"mid", 5.0}, {"high", 10.0}}); }

int cli_verify(const std::string &file, std::uint64_t seed, std::string *out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::cmd_verify(std::string(PROPSCORE_TEST_DATA) + "/" + file, {"all"}, seed, {}, o, e);
  if (out)
    *out = o.str();
  return code;
}

} // namespace

int main() {
  criterion(1, "closed form: Brier", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = from_measure(WeightMeasure::from_constant_density(2.0, 0.0, 1.0));
    double err = 0.0;
    for (double x : linspace(0.0, 1.0, 101)) {
      err = worst_abs(err, s.acc1(x) + (1 - x) * (1 - x));
      err = worst_abs(err, s.acc0(x) + x * x);
    }
    const double secs = seconds_since(t0);
    return Verdict{err < 1e-9 && secs < 1.0, fmt("max_err=%.3g (<1e-9) time=%.3fs (<1s)", err, secs)};
  });

  criterion(2, "closed form: log", [] {
    const auto s = from_measure(density([](double t) { return 1.0 / (t * (1 - t)); }));
    double err = 0.0;
    for (double x : linspace(0.01, 0.99, 99)) {
      err = worst_abs(err, s.acc1(x) - std::log(x));
      err = worst_abs(err, s.acc0(x) - std::log1p(-x));
    }
    return Verdict{err < 1e-6, fmt("max_err=%.3g (<1e-6)", err)};
  });

  criterion(3, "propriety: credences", [] {
    const auto b = check_propriety(brier(), 99), l = check_propriety(log_score(), 99);
    const auto bad = check_propriety(improper_linear_score(), 99);
    bool boundary = bad.rows.size() == 99;
    for (const auto &row : bad.rows)
      boundary = boundary && row.failed && (row.observed == 0.0 || row.observed == 1.0);
    return Verdict{b.pass && l.pass && b.worst < 1e-4 && l.worst < 1e-4 && boundary,
                   fmt("brier=%.3g log=%.3g (<1e-4) improper boundary-at-every-p=%g", b.worst, l.worst, boundary)};
  });

  criterion(4, "Schervish equivalences", [] {
    double worst = 0.0;
    bool pass = true;
    for (const auto &m : {WeightMeasure::from_constant_density(2.0, 0.0, 1.0), density([](double t) { return 1 + t; })}) {
      const auto r = equivalence_report(from_measure(m), m, 20, 1e-8);
      pass = pass && r.pass;
      worst = std::max(worst, r.worst);
    }
    return Verdict{pass, fmt("worst=%.3g (<1e-8) grid=20x20x20", worst)};
  });

  criterion(5, "stationarity", [] {
    double worst = 0.0;
    for (double t : linspace(0.02, 0.98, 50))
      worst = std::max({worst, check_stationarity(brier(), t), check_stationarity(log_score(), t)});
    const double improper = check_stationarity(improper_linear_score(), 0.5);
    return Verdict{worst < 1e-6 && improper >= 0.5,
                   fmt("worst=%.3g (<1e-6) improper@0.5=%.3g (>=0.5)", worst, improper)};
  });

  criterion(6, "mass roundtrip", [] {
    const auto m = density([](double t) { return 1 + t; });
    const auto s = from_measure(m);
    double worst = 0.0;
    for (double t : linspace(0.02, 0.98, 50))
      worst = worst_abs(worst, (recover_mass(s, t).mass - (1 + t)) / (1 + t));
    return Verdict{worst < 1e-4, fmt("worst_rel=%.3g (<1e-4)", worst)};
  });

  criterion(7, "entropy link", [] {
    const auto phi = entropy_of(brier());
    double worst = 0.0;
    for (double t : linspace(0.02, 0.98, 50))
      worst = worst_abs(worst, (mass_from_entropy(phi, t) - 2.0) / 2.0);
    double identity = 0.0;
    for (const RealFn &m : {RealFn([](double) { return 2.0; }), RealFn([](double t) { return 1 + t; })}) {
      const auto e = entropy_from_mass(m, 0.0, 1.0);
      for (double x : linspace(0.0, 1.0, 20))
        for (double p : linspace(0.0, 1.0, 20))
          identity = worst_abs(identity, check_integral_identity(e, x, p));
    }
    return Verdict{worst < 1e-3 && identity < 1e-8,
                   fmt("mass_rel=%.3g (<1e-3) identity=%.3g (<1e-8)", worst, identity)};
  });

  criterion(8, "propriety: estimates", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = check_propriety_estimates(quadratic_estimate_score(0.0, 10.0), three_values(), 21, {}, {200, 0});
    const double secs = seconds_since(t0);
    return Verdict{r.pass && r.worst < 1e-3 && secs < 30.0,
                   fmt("worst=%.3g (<1e-3) samples=%g time=%.2fs (<30s)", r.worst,
                       static_cast<double>(r.rows.size()), secs)};
  });

  criterion(9, "mass k-independence", [] {
    std::vector<double> ts;
    for (int i = 0; i < 20; ++i)
      ts.push_back(10.0 * (i + 0.5) / 20.0);
    const std::vector<double> ks{0.0, 5.0, 10.0};
    const auto good = check_mass_k_independence(
        EstimateScore(density([](double t) { return 1 + t / 10; }, 0.0, 10.0), {0.0, 10.0}), ks, ts);
    bool transitive = false;
    for (const auto &row : good.rows)
      for (const auto &[name, value] : row.inputs)
        transitive = transitive || (name == "path" && value == 1.0);
    const auto bad = check_mass_k_independence(stitched_estimate_score(0.0, 10.0, 2.0, {{10.0, 6.0}}), ks, ts);
    return Verdict{good.pass && transitive && !bad.pass,
                   fmt("worst=%.3g (<1e-3) transitive-rows=%g stitched-worst=%.3g", good.worst, transitive,
                       bad.worst)};
  });

  criterion(10, "two-point probabilities", [] {
    const auto v = three_values();
    const auto vals = v.values();
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum_err = 0.0, exp_err = 0.0;
    bool nonneg = true;
    for (int i = 0; i < 100; ++i) {
      const std::size_t a = gen() % 3, b = (a + 1 + gen() % 2) % 3;
      const double k = vals[a], r = vals[b];
      const double t = std::min(k, r) + u(gen) * std::abs(r - k);
      const auto p = two_point_probability(v, k, r, t);
      double sum = 0.0;
      for (const auto &[label, w] : p.weights()) {
        nonneg = nonneg && w >= 0.0;
        sum += w;
      }
      sum_err = worst_abs(sum_err, sum - 1.0);
      exp_err = worst_abs(exp_err, expectation(p, v) - t);
    }
    return Verdict{nonneg && sum_err <= 1e-12 && exp_err <= 1e-12,
                   fmt("sum_err=%.3g exp_err=%.3g (<=1e-12) nonneg=%g", sum_err, exp_err, nonneg)};
  });

  criterion(11, "indicator consistency", [] {
    const auto m = density([](double t) { return 1 + t; });
    const EstimateScore e(m, {0.0, 1.0});
    const auto c = from_measure(m);
    double worst = 0.0;
    for (double x : linspace(0.0, 1.0, 101)) {
      worst = worst_abs(worst, score(e, 0.0, x) - c.acc0(x));
      worst = worst_abs(worst, score(e, 1.0, x) - c.acc1(x));
    }
    return Verdict{worst < 1e-10, fmt("worst=%.3g (<1e-10)", worst)};
  });

  criterion(12, "Bregman form for estimates", [] {
    const auto v = three_values();
    double form = 0.0, expected = 0.0;
    for (const RealFn &m : {RealFn([](double) { return 2.0; }), RealFn([](double t) { return 1 + t / 10; })}) {
      const EstimateScore s(density(m, 0.0, 10.0), {0.0, 10.0});
      const auto b = bregman_form_estimates(s);
      form = std::max(form, b.max_residual);
      for (const auto &p : random_probabilities(v, 50, 12))
        for (double x : linspace(0.0, 10.0, 5))
          expected = worst_abs(expected, expected_form_check(s, b.entropy, v, p, x));
    }
    return Verdict{form < 1e-6 && expected < 1e-6, fmt("form=%.3g expected_form=%.3g (<1e-6)", form, expected)};
  });

  criterion(13, "CLI contract", [] {
    bool ok = true;
    for (const char *f : {"brier.json", "log.json", "linear_density.json", "brier_bregman.json", "log_bregman.json",
                          "quadratic_estimates.json", "sloped_estimates.json"})
      ok = ok && cli_verify(f, 0) == 0;
    for (const char *f : {"improper_linear.json", "stitched_estimates.json"})
      ok = ok && cli_verify(f, 0) == 1;
    std::string a, b;
    cli_verify("quadratic_estimates.json", 31, &a);
    cli_verify("quadratic_estimates.json", 31, &b);
    const bool same = !a.empty() && a == b;
    return Verdict{ok && same, fmt("exit-codes-ok=%g byte-identical=%g", ok, same)};
  });

  std::printf("%s  %d of 13 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
