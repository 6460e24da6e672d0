#pragma once

#include <stdexcept>
#include <string>

namespace propscore {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied function returned a non-finite value where a finite one was required.
class EvaluationError : public Error {
public:
  EvaluationError(double point, double value);
  EvaluationError(double point, double value, const std::string &what);

  double point() const noexcept { return point_; }
  double value() const noexcept { return value_; }

private:
  double point_;
  double value_;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class InvalidMeasure : public Error {
public:
  using Error::Error;
};

class InvalidEntropy : public Error {
public:
  using Error::Error;
};

class InvalidMass : public Error {
public:
  using Error::Error;
};

/// Probability labels that the random variable does not know about.
class MismatchError : public Error {
public:
  using Error::Error;
};

class MissingAnchor : public Error {
public:
  using Error::Error;
};

class UnsupportedForm : public Error {
public:
  using Error::Error;
};

/// Mass recovery at t too close to the true value k, where acc_k'(t)/(k-t) is 0/0.
class NearSingularity : public Error {
public:
  using Error::Error;
};

class InvalidProbability : public Error {
public:
  using Error::Error;
};

class InvalidVariable : public Error {
public:
  using Error::Error;
};

} // namespace propscore
