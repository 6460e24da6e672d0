#include "propscore/errors.hpp"
#include "propscore/numeric.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace propscore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("integrate: smooth integrands against closed forms", "[numeric]") {
  CHECK_THAT(integrate([](double t) { return std::sin(t); }, 0.0, M_PI), WithinAbs(2.0, 1e-10));
  CHECK_THAT(integrate([](double t) { return t * t * t; }, -1.0, 2.0), WithinAbs(3.75, 1e-12));
  // mpmath: 0.882081390762421679967...
  CHECK_THAT(integrate([](double t) { return std::exp(-t * t); }, 0.0, 2.0), WithinAbs(0.88208139076242168, 1e-10));
  CHECK_THAT(integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0), WithinAbs(2.0 / 3.0, 1e-9));
}

TEST_CASE("integrate: reversed limits flip the sign, empty interval is zero", "[numeric]") {
  const RealFn f = [](double t) { return 1.0 + t * t; };
  CHECK(integrate(f, 0.3, 0.3) == 0.0);
  const double fwd = integrate(f, 0.1, 0.9);
  CHECK(integrate(f, 0.9, 0.1) == -fwd);
}

TEST_CASE("integrate: additivity over a split point", "[numeric][property]") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const RealFn f = [](double t) { return std::cos(3.0 * t) + t; };
  for (int i = 0; i < 50; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen);
    CHECK_THAT(integrate(f, a, b) + integrate(f, b, c), WithinAbs(integrate(f, a, c), 1e-9));
  }
}

TEST_CASE("integrate: non-finite integrand raises EvaluationError with the point", "[numeric]") {
  try {
    integrate([](double t) { return t > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError &e) {
    CHECK(e.point() > 0.5);
    CHECK(std::isnan(e.value()));
  }
}

TEST_CASE("differentiate: central and one-sided stencils", "[numeric]") {
  const RealFn f = [](double t) { return std::exp(t); };
  CHECK_THAT(differentiate(f, 0.4), WithinRel(std::exp(0.4), 1e-8));
  const Interval dom{0.0, 1.0};
  CHECK_THAT(differentiate(f, 0.0, {}, dom), WithinRel(1.0, 1e-8));
  CHECK_THAT(differentiate(f, 1.0, {}, dom), WithinRel(std::exp(1.0), 1e-8));
  CHECK_THROWS_AS(differentiate(f, 1.5, {}, dom), DomainError);
}

TEST_CASE("second_difference: Richardson-extrapolated curvature", "[numeric]") {
  CHECK_THAT(second_difference([](double t) { return t * t; }, 0.3), WithinAbs(2.0, 1e-6));
  // Near the log-score edge, where a plain stencil is off by ~1e-3.
  const RealFn phi = [](double t) { return t * std::log(t) + (1 - t) * std::log1p(-t); };
  const double t = 0.02;
  CHECK_THAT(second_difference(phi, t, {}, Interval{0.0, 1.0}), WithinRel(1.0 / (t * (1 - t)), 1e-4));
}

TEST_CASE("argmax_1d: interior, boundary and ties", "[numeric]") {
  CHECK_THAT(argmax_1d([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0), WithinAbs(0.3, 1e-4));
  CHECK_THAT(argmax_1d([](double x) { return x; }, 0.0, 1.0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(argmax_1d([](double x) { return -x; }, 0.0, 1.0), WithinAbs(0.0, 1e-12));
  CHECK(argmax_1d([](double) { return 1.0; }, 0.0, 1.0) == 0.0);
  // -inf at the ends is tolerated.
  const RealFn log_exp = [](double x) {
    return 0.37 * std::log(x) + 0.63 * std::log1p(-x);
  };
  CHECK_THAT(argmax_1d(log_exp, 0.0, 1.0), WithinAbs(0.37, 1e-4));
}

TEST_CASE("argmax_1d: random concave quadratics", "[numeric][property]") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double c = u(gen), a = 0.1 + 5 * u(gen);
    CHECK_THAT(argmax_1d([&](double x) { return -a * (x - c) * (x - c); }, 0.0, 1.0), WithinAbs(c, 1e-4));
  }
}

TEST_CASE("is_convex_on_grid", "[numeric]") {
  CHECK(is_convex_on_grid([](double t) { return t * t; }, 0.0, 1.0, 201));
  CHECK(is_convex_on_grid([](double t) { return 3.0 * t - 1.0; }, 0.0, 1.0, 201));
  CHECK_FALSE(is_convex_on_grid([](double t) { return -t * t; }, 0.0, 1.0, 201));
  CHECK(is_convex_on_grid([](double t) { return t * std::log(t) + (1 - t) * std::log(1 - t); }, 0.0, 1.0, 201));
}

TEST_CASE("linspace and tolerances", "[numeric]") {
  const auto g = linspace(0.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == 0.5);
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.fd_step = 0.0;
  CHECK_THROWS(t.validate());
}
