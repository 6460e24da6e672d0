#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace propscore {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed real interval [lo, hi].
struct Interval {
  double lo;
  double hi;

  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Numerical tolerances shared by quadrature, differencing and maximisation.
struct Tolerances {
  double quad_rel = 1e-10;
  double quad_abs = 1e-12;
  double fd_step = 1e-5;
  double argmax_tol = 1e-4;

  /// Throws std::invalid_argument unless every field is positive and fd_step < 1e-2.
  void validate() const;
};

/// Adaptive Simpson quadrature of f over [a, b].
///
/// Reversed limits follow the signed convention: integrate(f, a, b) == -integrate(f, b, a).
/// Throws EvaluationError at the first sample where f is not finite.
double integrate(const RealFn &f, double a, double b, const Tolerances &tol = {});

/// Central-difference derivative of f at t.
///
/// When `domain` is given and t lies within fd_step of an end, a second-order
/// one-sided stencil is used instead. Throws DomainError when t is outside `domain`.
double differentiate(const RealFn &f, double t, const Tolerances &tol = {},
                     std::optional<Interval> domain = std::nullopt);

/// Second derivative of f at t: second divided differences at steps h and h/2 combined by
/// Richardson extrapolation, with h = sqrt(fd_step) shrunk to fit inside `domain` when given.
double second_difference(const RealFn &f, double t, const Tolerances &tol = {},
                         std::optional<Interval> domain = std::nullopt);

/// Location of the maximum of f on [lo, hi].
///
/// A 201-point grid scan picks the best cell, golden-section search refines it, and
/// the refined point competes against the grid winner. Ties go to the smaller location.
/// -inf values are allowed; NaN counts as an evaluation failure.
double argmax_1d(const RealFn &f, double lo, double hi, const Tolerances &tol = {});

/// True iff every interior second divided difference on an n-point grid is >= -quad_abs
/// (plus floating-point rounding slack). Triples touching a non-finite value are skipped.
bool is_convex_on_grid(const RealFn &f, double lo, double hi, std::size_t n,
                       const Tolerances &tol = {});

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace propscore
