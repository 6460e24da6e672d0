#include "propscore/errors.hpp"
#include "propscore/weight_measure.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace propscore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const RealFn one = [](double) { return 1.0; };
}

TEST_CASE("construction audits the density", "[measure]") {
  CHECK_NOTHROW(WeightMeasure::from_constant_density(2.0, 0.0, 1.0));
  CHECK_THROWS_AS(WeightMeasure::from_constant_density(0.0, 0.0, 1.0), InvalidMeasure);
  CHECK_THROWS_AS(WeightMeasure::from_density([](double t) { return t - 0.5; }, 0.0, 1.0), InvalidMeasure);
  CHECK_THROWS_AS(WeightMeasure::from_density([](double t) { return t > 0.4 && t < 0.41 ? NAN : 1.0; }, 0.0, 1.0),
                  InvalidMeasure);
  CHECK_THROWS_AS(WeightMeasure::from_density(one, 0.0, 1.0, {{1.5, 0.1}}), InvalidMeasure);
  CHECK_THROWS_AS(WeightMeasure::from_density(one, 0.0, 1.0, {{0.5, -0.1}}), InvalidMeasure);
  // Blow-up at the ends is allowed.
  CHECK_NOTHROW(WeightMeasure::from_density([](double t) { return 1.0 / (t * (1 - t)); }, 0.0, 1.0));
}

TEST_CASE("moment integrals against closed forms", "[measure]") {
  const auto lin = WeightMeasure::from_density([](double t) { return 1.0 + t; }, 0.0, 1.0);
  // mpmath oracle: integral from 0.3 to 1 of (1 - t)(1 + t) dt = 0.375666666666666666...
  CHECK_THAT(moment_integral(lin, 0.3, 1.0, 1.0), WithinAbs(0.37566666666666667, 1e-12));
  // Reversed: integral from 0.3 to 0 of (0 - t)(1 + t) dt = 0.054
  CHECK_THAT(moment_integral(lin, 0.3, 0.0, 0.0), WithinAbs(0.054, 1e-12));
  const auto slope = WeightMeasure::from_density([](double t) { return 1.0 + t / 10.0; }, 0.0, 10.0);
  CHECK_THAT(moment_integral(slope, 4.0, 10.0, 10.0), WithinAbs(28.8, 1e-10));
  CHECK_THAT(moment_integral(slope, 8.5, 5.0, 5.0), WithinAbs(10.616666666666667, 1e-10));
}

TEST_CASE("signed convention and additivity", "[measure][property]") {
  const auto m = WeightMeasure::from_density([](double t) { return 1.0 + t * t; }, 0.0, 1.0, {{0.25, 0.3}, {0.7, 0.1}});
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen), v = u(gen);
    const double ab = moment_integral(m, a, b, v), ba = moment_integral(m, b, a, v);
    CHECK(ab == -ba);
    CHECK_THAT(ab + moment_integral(m, b, c, v), WithinAbs(moment_integral(m, a, c, v), 1e-10));
  }
}

TEST_CASE("atoms count on the half-open interval", "[measure]") {
  const auto m = WeightMeasure::from_density(one, 0.0, 1.0, {{0.5, 0.25}});
  CHECK_THAT(m.mass_of(0.0, 0.5), WithinAbs(0.5, 1e-12));
  CHECK_THAT(m.mass_of(0.5, 1.0), WithinAbs(0.75, 1e-12));
  CHECK_THAT(m.integral(one, 0.2, 0.5).value, WithinAbs(0.3, 1e-12));
  CHECK_THAT(m.integral(one, 0.5, 0.8).value, WithinAbs(0.55, 1e-12));
  CHECK_THAT(m.integral(one, 0.8, 0.5).value, WithinAbs(-0.55, 1e-12));
}

TEST_CASE("singular densities: truncation and unbounded tails", "[measure]") {
  const auto logm = WeightMeasure::from_density([](double t) { return 1.0 / (t * (1 - t)); }, 0.0, 1.0);
  // (1 - t) / (t (1 - t)) = 1/t is not integrable at 0.
  const auto tail = moment_integral_detail(logm, 0.0, 1.0, 1.0);
  CHECK(tail.endpoint_truncated);
  CHECK(tail.unbounded);
  CHECK(tail.value == INFINITY);
  // But (1 - t) cancels the pole at 1.
  const auto fine = moment_integral_detail(logm, 0.2, 1.0, 1.0);
  CHECK(fine.endpoint_truncated);
  CHECK_FALSE(fine.unbounded);
  CHECK_THAT(fine.value, WithinAbs(-std::log(0.2), 1e-7));
  // Integrable singularity: 1/sqrt(t).
  const auto root = WeightMeasure::from_density([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0);
  const auto r = root.integral(one, 0.0, 1.0);
  CHECK_FALSE(r.unbounded);
  CHECK_THAT(r.value, WithinAbs(2.0, 1e-4));
}

TEST_CASE("strict positivity and scaling", "[measure]") {
  CHECK(is_strictly_positive(WeightMeasure::from_constant_density(2.0, 0.0, 1.0), 100));
  const auto gap = WeightMeasure::from_density([](double t) { return t < 0.4 || t > 0.6 ? 1.0 : 0.0; }, 0.0, 1.0);
  CHECK_FALSE(is_strictly_positive(gap, 100));
  CHECK_THROWS(is_strictly_positive(gap, 5));
  const auto s = WeightMeasure::from_density(one, 0.0, 1.0, {{0.5, 0.25}}).scaled(4.0);
  CHECK(s.density(0.3) == 4.0);
  CHECK(s.atoms()[0].mass == 1.0);
}
