#include "propscore/expression.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace propscore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("parse and evaluate", "[expression]") {
  CHECK(Expression::parse("2")(0.7) == 2.0);
  CHECK_THAT(Expression::parse("1 + t/10")(4.0), WithinAbs(1.4, 1e-15));
  CHECK_THAT(Expression::parse("1/(x*(1-x))")(0.25), WithinRel(16.0 / 3.0, 1e-15));
  CHECK_THAT(Expression::parse("exp(p) - ln(p)")(2.0), WithinRel(std::exp(2.0) - std::log(2.0), 1e-15));
  CHECK(Expression::parse("-2^2")(0.0) == -4.0);
  CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expression::parse("2*-t")(3.0) == -6.0);
}

TEST_CASE("0 * inf is 0 so entropies are finite at the ends", "[expression]") {
  const auto e = Expression::parse("x*ln(x) + (1-x)*ln(1-x)");
  CHECK(e(0.0) == 0.0);
  CHECK(e(1.0) == 0.0);
  CHECK_THAT(e(0.5), WithinRel(-std::log(2.0), 1e-15));
  CHECK(Expression::parse("ln(x)")(0.0) == -INFINITY);
}

TEST_CASE("parse errors carry a column", "[expression]") {
  CHECK_THROWS_AS(Expression::parse("1 + "), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("(t"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("sin(t)"), ExpressionError);
  try {
    Expression::parse("t + y");
    FAIL("expected ExpressionError");
  } catch (const ExpressionError &e) {
    CHECK(e.column() == 4);
  }
}

TEST_CASE("symbolic derivatives agree with closed forms", "[expression]") {
  const auto phi = Expression::parse("x*ln(x) + (1-x)*ln(1-x)");
  const auto d1 = phi.derivative();
  const auto d2 = d1.derivative();
  for (double x : {0.1, 0.35, 0.8}) {
    CHECK_THAT(d1(x), WithinAbs(std::log(x / (1 - x)), 1e-13));
    CHECK_THAT(d2(x), WithinRel(1.0 / (x * (1 - x)), 1e-13));
  }
  CHECK_THAT(Expression::parse("exp(2*t)").derivative()(0.5), WithinRel(2.0 * std::exp(1.0), 1e-15));
  CHECK_THAT(Expression::parse("t^3").derivative()(2.0), WithinRel(12.0, 1e-15));
}

TEST_CASE("polynomial extraction", "[expression]") {
  const auto c = Expression::parse("1 + t/10").polynomial();
  REQUIRE(c);
  REQUIRE(c->size() == 2);
  CHECK((*c)[0] == 1.0);
  CHECK_THAT((*c)[1], WithinAbs(0.1, 1e-17));
  const auto q = Expression::parse("(t - 1)^2").polynomial();
  REQUIRE(q);
  CHECK((*q)[0] == 1.0);
  CHECK((*q)[1] == -2.0);
  CHECK((*q)[2] == 1.0);
  CHECK_FALSE(Expression::parse("1/t").polynomial());
  CHECK_FALSE(Expression::parse("ln(t)").polynomial());
}

TEST_CASE("to_string round-trips", "[expression][property]") {
  for (const char *text : {"1 + t/10", "x*ln(x) + (1-x)*ln(1-x)", "-2^t^0.5", "exp(-t)/(1+t)"}) {
    const auto e = Expression::parse(text);
    const auto back = Expression::parse(e.to_string("x"));
    for (double t : {0.05, 0.4, 0.9})
      CHECK(back(t) == e(t));
  }
  const auto p = Expression::parse(polynomial_to_string({0.0, 1.5, 0.25}, "x", 0.5));
  CHECK_THAT(p(0.9), WithinAbs(1.5 * 0.4 + 0.25 * 0.16, 1e-15));
}
