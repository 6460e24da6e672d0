#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace propscore {

/// One case examined by a check.
struct ReportRow {
  std::vector<std::pair<std::string, double>> inputs;
  double observed = 0.0;
  double expected = 0.0;
  double residual = 0.0;
  bool failed = false;
};

/// Outcome of a verification check. `pass` holds iff `worst < threshold`.
struct VerificationReport {
  std::string check;
  bool pass = false;
  double worst = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<std::string, std::size_t>> grid_sizes;
  std::vector<ReportRow> rows;
  /// Secondary diagnostics (name, value), printed but not part of the verdict.
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  /// Sets `pass` from `worst` and `threshold`.
  void finalize() { pass = worst < threshold; }

  /// Records a row, marks it failed unless its residual is below `threshold`, and folds
  /// the residual into `worst`. NaN residuals count as infinite. Set `threshold` first.
  void add(ReportRow row);
};

/// Deterministic text rendering. `max_rows` bounds the failing rows printed.
void print_report(std::ostream &out, const VerificationReport &report, std::size_t max_rows = 10);

/// Formats a double with `digits` significant digits; infinities print as "inf"/"-inf".
std::string format_real(double v, int digits = 12);

} // namespace propscore
