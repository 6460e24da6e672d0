#include "propscore/credence_score.hpp"
#include "propscore/errors.hpp"
#include "propscore/estimate_score.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace propscore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RandomVariable three_values() { return RandomVariable({{"low", 0.0}, {"mid", 5.0}, {"high", 10.0}}); }

EstimateScore sloped() {
  return EstimateScore(WeightMeasure::from_density([](double t) { return 1.0 + t / 10.0; }, 0.0, 10.0), {0.0, 10.0});
}

} // namespace

TEST_CASE("random variables and probabilities validate their input", "[estimates]") {
  CHECK_THROWS_AS(RandomVariable({{"a", 1.0}, {"a", 2.0}}), InvalidVariable);
  CHECK_THROWS_AS(RandomVariable({{"a", 1.0}, {"b", 1.0}}), InvalidVariable);
  const auto v = three_values();
  CHECK(v.hull().lo == 0.0);
  CHECK(v.hull().hi == 10.0);
  CHECK(v.values() == std::vector<double>{0.0, 5.0, 10.0});
  CHECK_THROWS_AS(v.value_of("nope"), MismatchError);
  CHECK_THROWS_AS(FiniteProbability({{"low", 0.5}, {"mid", 0.6}}), InvalidProbability);
  CHECK_THROWS_AS(FiniteProbability({{"low", -0.1}, {"mid", 1.1}}), InvalidProbability);
  const FiniteProbability p({{"low", 0.2}, {"high", 0.8}});
  CHECK(expectation(p, v) == 8.0);
  CHECK_THROWS_AS(expectation(FiniteProbability({{"other", 1.0}}), v), MismatchError);
}

TEST_CASE("scores against closed forms", "[estimates]") {
  const auto q = quadratic_estimate_score(0.0, 10.0);
  CHECK_THAT(score(q, 5.0, 2.0), WithinAbs(-9.0, 1e-10));
  CHECK(score(q, 5.0, 5.0) == 0.0);
  const auto s = sloped();
  // mpmath oracles for -integral from x to k of (k - t)(1 + t/10) dt.
  CHECK_THAT(score(s, 10.0, 4.0), WithinAbs(-28.8, 1e-10));
  CHECK_THAT(score(s, 0.0, 4.0), WithinAbs(-10.133333333333333, 1e-10));
  CHECK_THAT(score(s, 5.0, 8.5), WithinAbs(-10.616666666666667, 1e-10));
  CHECK_THROWS_AS(score(s, 5.0, 11.0), DomainError);
  CHECK_THROWS_AS(score(s, -1.0, 5.0), DomainError);
}

TEST_CASE("anchors", "[estimates]") {
  AnchorTable a;
  a.fallback.reset();
  a.values[5.0] = 2.0;
  const EstimateScore s(WeightMeasure::from_constant_density(2.0, 0.0, 10.0), {0.0, 10.0}, a);
  CHECK_THAT(score(s, 5.0, 3.0), WithinAbs(2.0 - 4.0, 1e-10));
  CHECK_THROWS_AS(score(s, 0.0, 3.0), MissingAnchor);
  CHECK_THROWS_AS(EstimateScore(WeightMeasure::from_constant_density(2.0, 0.0, 5.0), {0.0, 10.0}), DomainError);
}

TEST_CASE("indicator specialisation equals the credence score", "[estimates]") {
  const auto m = WeightMeasure::from_density([](double t) { return 1.0 + t; }, 0.0, 1.0);
  const EstimateScore e(m, {0.0, 1.0});
  const auto c = from_measure(m);
  for (double x : linspace(0.0, 1.0, 101)) {
    CHECK_THAT(score(e, 0.0, x), WithinAbs(c.acc0(x), 1e-10));
    CHECK_THAT(score(e, 1.0, x), WithinAbs(c.acc1(x), 1e-10));
  }
}

TEST_CASE("simplex sampling", "[estimates]") {
  const auto v = three_values();
  CHECK(sample_probabilities(v, 21).size() == 231);
  CHECK(sample_probabilities(v, 21, {200, 1}).size() == 431);
  const RandomVariable four({{"a", 0.0}, {"b", 1.0}, {"c", 2.0}, {"d", 3.0}});
  CHECK(sample_probabilities(four, 21).size() == 4 + 6 + 200);
  const auto a = random_probabilities(v, 20, 42), b = random_probabilities(v, 20, 42);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].weights() == b[i].weights());
  CHECK(random_probabilities(v, 1, 43)[0].weights() != a[0].weights());
}

TEST_CASE("propriety for estimates", "[estimates]") {
  const auto v = three_values();
  const auto good = check_propriety_estimates(sloped(), v, 21, {}, {200, 0});
  CHECK(good.pass);
  CHECK(good.worst < 1e-3);
  CHECK(good.strict_capable);
  CHECK(good.crosscheck_worst < 1e-8);
  const auto bad = check_propriety_estimates(stitched_estimate_score(0.0, 10.0, 2.0, {{10.0, 6.0}}), v, 21);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.strict_capable);
}

TEST_CASE("two-point probabilities", "[estimates][property]") {
  const auto v = three_values();
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> vals = v.values();
  for (int i = 0; i < 100; ++i) {
    double k = vals[gen() % 3], r = vals[gen() % 3];
    while (r == k)
      r = vals[gen() % 3];
    const double t = std::min(k, r) + u(gen) * std::abs(r - k);
    const auto p = two_point_probability(v, k, r, t);
    double sum = 0.0;
    for (const auto &[label, w] : p.weights()) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
    CHECK_THAT(expectation(p, v), WithinAbs(t, 1e-12));
  }
  CHECK_THROWS(two_point_probability(v, 0.0, 5.0, 7.0));
}

TEST_CASE("mass recovery is independent of k for form-built scores", "[estimates]") {
  const auto s = sloped();
  CHECK_THAT(recover_mass_estimates(s, 10.0, 3.0), WithinRel(1.3, 1e-5));
  CHECK_THAT(recover_mass_estimates(s, 0.0, 3.0), WithinRel(1.3, 1e-5));
  CHECK_THROWS_AS(recover_mass_estimates(s, 5.0, 5.0), NearSingularity);
  std::vector<double> ts;
  for (int i = 0; i < 20; ++i)
    ts.push_back(10.0 * (i + 0.5) / 20.0);
  CHECK(check_mass_k_independence(s, {0.0, 5.0, 10.0}, ts).pass);
  CHECK_FALSE(check_mass_k_independence(stitched_estimate_score(0.0, 10.0, 2.0, {{10.0, 6.0}}), {0.0, 5.0, 10.0}, ts).pass);
}

TEST_CASE("value-directedness", "[estimates]") {
  for (double k : {0.0, 5.0, 10.0})
    CHECK(check_value_directedness(sloped(), k, 101));
  const EstimateScore flat(WeightMeasure::from_density([](double t) { return t < 4.0 ? 1.0 : 0.0; }, 0.0, 10.0),
                           {0.0, 10.0});
  CHECK_FALSE(check_value_directedness(flat, 10.0, 101));
}

TEST_CASE("Bregman form for estimates", "[estimates]") {
  const auto form = bregman_form_estimates(sloped());
  CHECK(form.max_residual < 1e-6);
  CHECK(form.cases > 0);
  const auto v = three_values();
  for (const auto &p : random_probabilities(v, 20, 5))
    for (double x : {0.0, 3.0, 10.0})
      CHECK(expected_form_check(sloped(), form.entropy, v, p, x) < 1e-6);
  CHECK_THROWS_AS(bregman_form_estimates(stitched_estimate_score(0.0, 10.0, 2.0, {{10.0, 6.0}})), UnsupportedForm);
  const EstimateScore atoms(WeightMeasure::from_density([](double) { return 1.0; }, 0.0, 10.0, {{3.0, 1.0}}), {0.0, 10.0});
  CHECK_THROWS_AS(bregman_form_estimates(atoms), UnsupportedForm);
}
