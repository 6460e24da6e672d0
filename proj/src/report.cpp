#include "propscore/report.hpp"

#include "propscore/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace propscore {

std::string format_real(double v, int digits) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (std::isnan(v))
    return "nan";
  if (v == 0.0)
    v = 0.0; // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void VerificationReport::add(ReportRow row) {
  const double r = std::isnan(row.residual) ? kInf : row.residual;
  row.failed = !(r < threshold);
  if (rows.empty() || r > worst)
    worst = r;
  rows.push_back(std::move(row));
}

namespace {

void print_row(std::ostream &out, const ReportRow &row) {
  out << "   ";
  for (const auto &[name, value] : row.inputs)
    out << ' ' << name << '=' << format_real(value, 6);
  out << " observed=" << format_real(row.observed, 9) << " expected=" << format_real(row.expected, 9)
      << " residual=" << format_real(row.residual, 3) << '\n';
}

} // namespace

void print_report(std::ostream &out, const VerificationReport &report, std::size_t max_rows) {
  out << (report.pass ? "PASS " : "FAIL ") << report.check << "  worst=" << format_real(report.worst, 4)
      << " threshold=" << format_real(report.threshold, 4);
  for (const auto &[name, n] : report.grid_sizes)
    out << ' ' << name << '=' << n;
  out << '\n';
  for (const auto &[name, value] : report.metrics)
    out << "    " << name << '=' << format_real(value, 4) << '\n';
  for (const auto &note : report.notes)
    out << "    note: " << note << '\n';

  std::size_t failed = 0;
  const ReportRow *worst_row = nullptr;
  for (const auto &row : report.rows) {
    if (!worst_row || row.residual > worst_row->residual)
      worst_row = &row;
    if (row.failed) {
      if (failed < max_rows)
        print_row(out, row);
      ++failed;
    }
  }
  if (failed > max_rows)
    out << "    ... " << (failed - max_rows) << " more failing rows\n";
  if (failed == 0 && worst_row) {
    out << "    worst case:\n";
    print_row(out, *worst_row);
  }
}

} // namespace propscore
