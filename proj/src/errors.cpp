#include "propscore/errors.hpp"

#include <cstdio>

namespace propscore {

namespace {

std::string describe(double point, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "non-finite evaluation %g at t = %.17g", value, point);
  return buf;
}

} // namespace

EvaluationError::EvaluationError(double point, double value)
    : Error(describe(point, value)), point_(point), value_(value) {}

EvaluationError::EvaluationError(double point, double value, const std::string &what)
    : Error(what + ": " + describe(point, value)), point_(point), value_(value) {}

} // namespace propscore
