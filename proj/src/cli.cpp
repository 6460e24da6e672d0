#include "propscore/cli.hpp"

#include "propscore/spec_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace propscore::cli {

namespace {

/// Input failure already rendered as a line-anchored message.
struct InputFailure {
  std::string message;
};

struct Loaded {
  std::string path;
  std::string text;
  ScoreSpec spec;
};

std::pair<std::size_t, std::size_t> line_col(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string anchored(const std::string &path, std::size_t line, std::size_t col, const std::string &msg) {
  return path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": error: " + msg;
}

std::string anchored_at_key(const std::string &path, const std::string &text, const std::string &key,
                            const std::string &msg) {
  std::size_t byte = 0;
  if (!key.empty())
    if (const auto pos = text.find("\"" + key + "\""); pos != std::string::npos)
      byte = pos;
  const auto [line, col] = line_col(text, byte);
  return anchored(path, line, col, msg);
}

Loaded load(const std::string &path, const Tolerances &tol) {
  std::ifstream in(path);
  if (!in)
    throw InputFailure{path + ":1:1: error: cannot open file"};
  std::stringstream buf;
  buf << in.rdbuf();
  Loaded out{path, buf.str(), CredenceSpec{}};
  Json j;
  try {
    j = Json::parse(out.text);
  } catch (const Json::parse_error &e) {
    const auto [line, col] = line_col(out.text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputFailure{anchored(path, line, col, e.what())};
  }
  try {
    out.spec = parse_score_spec(j);
    // Build once so construction errors surface as input errors.
    std::visit([&](const auto &s) { s.build(tol); }, out.spec);
  } catch (const SpecError &e) {
    throw InputFailure{anchored_at_key(path, out.text, e.key(), e.what())};
  } catch (const std::exception &e) {
    throw InputFailure{anchored(path, 1, 1, e.what())};
  }
  return out;
}

template <class F> int guarded(std::ostream &err, F &&f) {
  try {
    return f();
  } catch (const InputFailure &e) {
    err << e.message << '\n';
    return kInputError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

std::vector<double> interior(double lo, double hi, std::size_t n) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < n; ++i)
    ts.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return ts;
}

// ---------------------------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------------------------

struct Verifier {
  const std::set<std::string> &checks;
  std::ostream &out;
  int failed = 0;
  int ran = 0;

  bool wants(const std::string &name) const { return checks.count("all") > 0 || checks.count(name) > 0; }

  void emit(const VerificationReport &r) {
    print_report(out, r);
    ++ran;
    if (!r.pass)
      ++failed;
  }

  void skip(const std::string &name, const std::string &why) { out << "SKIP " << name << "  " << why << '\n'; }

  /// Runs `make`, turning library errors into a failing report named `name`.
  void run(const std::string &name, const std::function<VerificationReport()> &make) {
    try {
      emit(make());
    } catch (const Error &e) {
      VerificationReport r;
      r.check = name;
      r.worst = kInf;
      r.threshold = 0.0;
      r.notes.push_back(e.what());
      r.finalize();
      emit(r);
    }
  }
};

VerificationReport integral_identity_report(const Entropy &phi, std::size_t n, double threshold,
                                            const Tolerances &tol) {
  VerificationReport r;
  r.check = "bregman-integral-identity";
  r.threshold = threshold;
  r.grid_sizes = {{"x", n}, {"p", n}};
  const auto grid = linspace(phi.domain().lo, phi.domain().hi, n);
  for (double x : grid)
    for (double p : grid) {
      const double res = check_integral_identity(phi, x, p, tol);
      r.add({{{"x", x}, {"p", p}}, res, 0.0, res});
    }
  r.finalize();
  return r;
}

void verify_credence(Verifier &v, const CredenceScore &s, const Tolerances &tol) {
  const auto &lambda = s.measure();
  if (v.wants("propriety"))
    v.run("propriety", [&] { return check_propriety(s, 99, tol); });
  if (v.wants("directedness"))
    v.run("truth-directedness", [&] { return truth_directedness_report(s, 101); });
  if (v.wants("stationarity"))
    v.run("stationarity", [&] { return stationarity_report(s, 49, 1e-6, tol); });
  if (v.wants("equivalences")) {
    if (lambda)
      v.run("schervish-equivalences", [&] { return equivalence_report(s, *lambda, 20, 1e-8, tol); });
    else
      v.skip("schervish-equivalences", "no weighting measure behind this score");
  }
  if (v.wants("mass")) {
    if (lambda && !lambda->has_atoms())
      v.run("mass-roundtrip", [&] { return mass_roundtrip_report(s, *lambda, 50, 1e-4, tol); });
    else
      v.skip("mass-roundtrip", "needs an atom-free weighting measure");
  }
  if (v.wants("entropy"))
    v.run("entropy-curvature", [&] { return entropy_link_report(s, 50, 1e-3, tol); });
  if (v.wants("bregman")) {
    if (s.entropy() && s.entropy()->has_ddphi())
      v.run("bregman-integral-identity", [&] { return integral_identity_report(*s.entropy(), 20, 1e-8, tol); });
    else if (lambda && !lambda->has_atoms())
      v.run("bregman-integral-identity",
            [&] { return integral_identity_report(entropy_from_measure(*lambda, std::nullopt, tol), 20, 1e-8, tol); });
    else
      v.skip("bregman-integral-identity", "needs a twice-differentiable entropy");
  }
}

void verify_estimate(Verifier &v, const EstimateScore &s, const RandomVariable &var, std::uint64_t seed,
                     const Tolerances &tol) {
  if (v.wants("propriety"))
    v.run("propriety-estimates", [&] { return VerificationReport(check_propriety_estimates(s, var, 21, tol, {200, seed})); });
  if (v.wants("directedness"))
    for (double k : var.values())
      v.run("value-directedness", [&] { return value_directedness_report(s, k, 101); });
  if (v.wants("k-independence"))
    v.run("mass-k-independence",
          [&] { return check_mass_k_independence(s, var.values(), interior(s.hull().lo, s.hull().hi, 20), tol); });
  if (v.wants("bregman")) {
    if (s.measure().has_atoms() || s.stitched()) {
      v.skip("bregman-form", "needs a single atom-free measure");
      return;
    }
    v.run("bregman-form", [&] {
      const auto form = bregman_form_estimates(s, tol);
      VerificationReport r;
      r.check = "bregman-form";
      r.threshold = 1e-6;
      r.grid_sizes = {{"cases", form.cases}};
      r.add({{}, form.max_residual, 0.0, form.max_residual});
      r.finalize();
      return r;
    });
    v.run("expected-form", [&] {
      const auto phi = bregman_form_estimates(s, tol).entropy;
      VerificationReport r;
      r.check = "expected-form";
      r.threshold = 1e-6;
      const auto ps = random_probabilities(var, 50, seed);
      const auto xs = linspace(s.hull().lo, s.hull().hi, 5);
      r.grid_sizes = {{"probabilities", ps.size()}, {"x", xs.size()}};
      for (std::size_t i = 0; i < ps.size(); ++i)
        for (double x : xs) {
          const double res = expected_form_check(s, phi, var, ps[i], x);
          r.add({{{"sample", static_cast<double>(i)}, {"x", x}}, res, 0.0, res});
        }
      r.finalize();
      return r;
    });
  }
}

// ---------------------------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------------------------

std::vector<double> taylor_shift(const std::vector<double> &c, double a) {
  // Coefficients of sum c_i t^i rewritten in powers of (t - a).
  std::vector<double> b(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double binom = 1.0;
    for (std::size_t j = 0; j <= i; ++j) {
      b[j] += c[i] * binom * std::pow(a, static_cast<double>(i - j));
      binom = binom * static_cast<double>(i - j) / static_cast<double>(j + 1);
    }
  }
  return b;
}

/// Entropy whose phi'' is the density, gauge-fixed at the domain midpoint. Polynomial densities
/// integrate in closed form; anything else is emitted in mass form.
EntropySpec entropy_for_density(const DensitySpec &d, const Interval &domain) {
  const double a = domain.midpoint();
  std::optional<std::vector<double>> poly;
  if (d.constant)
    poly = std::vector<double>{*d.constant};
  else
    poly = d.expr->polynomial();

  EntropySpec e;
  e.domain = domain;
  if (!poly) {
    e.mass = *d.expr;
    e.anchor = a;
    return e;
  }
  const auto b = taylor_shift(*poly, a);
  std::vector<double> dd = b, d1(b.size() + 1, 0.0), d0(b.size() + 2, 0.0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    d1[j + 1] = b[j] / static_cast<double>(j + 1);
    d0[j + 2] = b[j] / static_cast<double>((j + 1) * (j + 2));
  }
  e.phi = Expression::parse(polynomial_to_string(d0, "x", a));
  e.dphi = Expression::parse(polynomial_to_string(d1, "x", a));
  e.ddphi = Expression::parse(polynomial_to_string(dd, "x", a));
  return e;
}

double max_score_gap(const CredenceScore &a, const CredenceScore &b) {
  double worst = 0.0;
  for (double x : linspace(0.0, 1.0, 101))
    for (int v = 0; v <= 1; ++v) {
      const double p = a.acc(v, x), q = b.acc(v, x);
      if (std::isinf(p) && p == q)
        continue;
      worst = std::max(worst, std::isnan(p - q) ? kInf : std::abs(p - q));
    }
  return worst;
}

Json diagnostics(double residual, std::size_t grid) {
  return {{"max_residual", residual}, {"grid", grid}};
}

int convert_credence(const CredenceSpec &spec, const std::string &target, const Tolerances &tol,
                     std::ostream &out, std::ostream &err) {
  const CredenceScore original = spec.build(tol);
  const auto [a0, a1] = spec.anchors.value_or(std::pair{original.anchor0(), original.anchor1()});
  CredenceSpec converted;
  converted.form = target;
  converted.anchors = std::pair{a0, a1};

  if (target == "bregman") {
    if (spec.form == "bregman") {
      converted.entropy = spec.entropy;
    } else {
      const auto m = spec.schervish_measure();
      if (!m) {
        err << "error: no weighting measure behind this score; cannot convert to bregman\n";
        return kInputError;
      }
      if (!m->atoms.empty()) {
        err << "error: measures with atoms have no Bregman form\n";
        return kInputError;
      }
      converted.entropy = entropy_for_density(m->density, m->domain);
    }
  } else {
    if (spec.form == "bregman") {
      MeasureSpec m;
      m.domain = spec.entropy->domain;
      m.density.expr = spec.entropy->curvature_expr();
      converted.measure = m;
    } else {
      converted.measure = spec.schervish_measure();
      if (!converted.measure) {
        err << "error: no weighting measure behind this score; cannot convert to schervish\n";
        return kInputError;
      }
    }
  }

  // Round-trip through the parser so the emitted document is known to load.
  Json j = converted.to_json();
  const auto reparsed = std::get<CredenceSpec>(parse_score_spec(j));
  j["diagnostics"] = diagnostics(max_score_gap(original, reparsed.build(tol)), 101);
  out << j.dump(2) << '\n';
  return kOk;
}

int convert_estimate(const EstimateSpec &spec, const std::string &target, const Tolerances &tol, std::ostream &out,
                     std::ostream &err) {
  const EstimateScore s = spec.build(tol);
  if (target == "schervish") {
    Json j = spec.to_json();
    j["diagnostics"] = diagnostics(0.0, 0);
    out << j.dump(2) << '\n';
    return kOk;
  }
  if (!spec.measure.atoms.empty() || !spec.per_value.empty()) {
    err << "error: Bregman form needs a single atom-free measure\n";
    return kInputError;
  }
  const auto form = bregman_form_estimates(s, tol);
  const EntropySpec entropy = entropy_for_density(spec.measure.density, spec.hull);
  Json j = {{"form", "bregman"}, {"entropy", entropy.to_json()}, {"hull", Json::array({spec.hull.lo, spec.hull.hi})},
            {"anchors", to_json(spec.anchors)}};
  if (spec.variable)
    j["variable"] = to_json(*spec.variable);
  // Residual of the emitted entropy against the score itself.
  const Entropy phi = parse_entropy(j["entropy"]).build(tol);
  double worst = form.max_residual;
  const auto grid = linspace(spec.hull.lo, spec.hull.hi, 21);
  for (double k : grid)
    for (double x : grid) {
      if (!s.anchors().has(k))
        continue;
      const double r = std::abs(score(s, k, x) - s.anchors().at(k) + divergence(phi, k, x));
      worst = std::max(worst, std::isnan(r) ? kInf : r);
    }
  j["diagnostics"] = diagnostics(worst, form.cases + grid.size() * grid.size());
  out << j.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------------------------
// tabulate
// ---------------------------------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(std::ostream &os) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto &row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << format_real(row[i], 12);
      os << '\n';
    }
  }
};

Table divergence_table(const Entropy &phi, std::size_t n) {
  Table t;
  const auto grid = linspace(phi.domain().lo, phi.domain().hi, n);
  t.header.push_back("x");
  for (double p : grid)
    t.header.push_back("p=" + format_real(p, 6));
  for (double x : grid) {
    std::vector<double> row{x};
    for (double p : grid)
      row.push_back(divergence(phi, p, x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table entropy_table(const Entropy &phi, std::size_t n) {
  Table t{{"x", "phi", "dphi"}, {}};
  for (double x : linspace(phi.domain().lo, phi.domain().hi, n))
    t.rows.push_back({x, phi.phi(x), phi.dphi(x)});
  return t;
}

Table tabulate_credence(const CredenceSpec &spec, const std::string &what, std::size_t n, const Tolerances &tol) {
  const CredenceScore s = spec.build(tol);
  if (what == "scores") {
    Table t{{"x", "acc0", "acc1"}, {}};
    for (double x : linspace(0.0, 1.0, n))
      t.rows.push_back({x, s.acc0(x), s.acc1(x)});
    return t;
  }
  const Entropy phi = spec.form == "bregman" ? spec.entropy->build(tol) : entropy_of(s);
  return what == "entropy" ? entropy_table(phi, n) : divergence_table(phi, n);
}

Table tabulate_estimate(const EstimateSpec &spec, const std::string &what, std::size_t n, const Tolerances &tol) {
  const EstimateScore s = spec.build(tol);
  if (what == "scores") {
    const auto ks = spec.variable_or_default().values();
    Table t;
    t.header.push_back("x");
    for (double k : ks)
      t.header.push_back("acc_k=" + format_real(k, 6));
    for (double x : linspace(s.hull().lo, s.hull().hi, n)) {
      std::vector<double> row{x};
      for (double k : ks)
        row.push_back(score(s, k, x));
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  const Entropy phi = bregman_form_estimates(s, tol).entropy;
  return what == "entropy" ? entropy_table(phi, n) : divergence_table(phi, n);
}

} // namespace

int cmd_eval(const std::string &spec_path, double value, double x, const Tolerances &tol, std::ostream &out,
             std::ostream &err) {
  return guarded(err, [&] {
    const Loaded in = load(spec_path, tol);
    double result = 0.0;
    if (const auto *c = std::get_if<CredenceSpec>(&in.spec)) {
      if (value != 0.0 && value != 1.0)
        throw InputFailure{in.path + ":1:1: error: credence scores take a truth value of 0 or 1"};
      result = c->build(tol).acc(static_cast<int>(value), x);
    } else {
      result = score(std::get<EstimateSpec>(in.spec).build(tol), value, x);
    }
    out << format_real(result, 12) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const std::string &spec_path, const std::set<std::string> &checks, std::uint64_t seed,
               const Tolerances &tol, std::ostream &out, std::ostream &err) {
  static const std::set<std::string> known = {"all",          "propriety", "directedness",   "stationarity",
                                              "equivalences", "mass",      "entropy",        "k-independence",
                                              "bregman"};
  for (const auto &c : checks)
    if (!known.count(c)) {
      err << "error: unknown check '" << c << "'\n";
      return kInputError;
    }
  return guarded(err, [&] {
    const Loaded in = load(spec_path, tol);
    Verifier v{checks, out};
    out << "verify " << in.path << " seed=" << seed << '\n';
    if (const auto *c = std::get_if<CredenceSpec>(&in.spec)) {
      verify_credence(v, c->build(tol), tol);
    } else {
      const auto &e = std::get<EstimateSpec>(in.spec);
      verify_estimate(v, e.build(tol), e.variable_or_default(), seed, tol);
    }
    out << (v.failed == 0 ? "RESULT PASS" : "RESULT FAIL") << "  checks=" << v.ran << " failed=" << v.failed
        << '\n';
    return static_cast<int>(v.failed == 0 ? kOk : kCheckFailed);
  });
}

int cmd_convert(const std::string &spec_path, const std::string &target, const Tolerances &tol,
                std::ostream &out, std::ostream &err) {
  if (target != "schervish" && target != "bregman") {
    err << "error: conversion target must be 'schervish' or 'bregman'\n";
    return kInputError;
  }
  return guarded(err, [&] {
    const Loaded in = load(spec_path, tol);
    if (const auto *c = std::get_if<CredenceSpec>(&in.spec))
      return convert_credence(*c, target, tol, out, err);
    return convert_estimate(std::get<EstimateSpec>(in.spec), target, tol, out, err);
  });
}

int cmd_tabulate(const std::string &spec_path, const std::string &what, std::size_t n,
                 const std::string &out_path, const Tolerances &tol, std::ostream &out, std::ostream &err) {
  if (what != "scores" && what != "entropy" && what != "divergence") {
    err << "error: tabulate needs 'scores', 'entropy' or 'divergence'\n";
    return kInputError;
  }
  if (n < 2) {
    err << "error: tabulate needs n >= 2\n";
    return kInputError;
  }
  return guarded(err, [&] {
    const Loaded in = load(spec_path, tol);
    const Table table = std::holds_alternative<CredenceSpec>(in.spec)
                            ? tabulate_credence(std::get<CredenceSpec>(in.spec), what, n, tol)
                            : tabulate_estimate(std::get<EstimateSpec>(in.spec), what, n, tol);
    if (out_path.empty()) {
      table.write(out);
      return static_cast<int>(kOk);
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return static_cast<int>(kInputError);
    }
    table.write(file);
    file.flush();
    if (!file) {
      err << "error: failed writing " << out_path << '\n';
      return static_cast<int>(kInputError);
    }
    return static_cast<int>(kOk);
  });
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Construct and verify proper scoring rules in Schervish and Bregman form", "propscore"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string spec;
  std::uint64_t seed = 0;
  std::optional<double> argmax_tol;
  std::string out_path;
  app.add_option("--spec", spec, "Score spec (JSON)")->required();
  app.add_option("--seed", seed, "Seed for sampled probabilities");
  app.add_option("--tol", argmax_tol, "Maximiser location tolerance (overrides argmax_tol)");
  app.add_option("--out", out_path, "Output path");

  double value = 0.0, x = 0.0;
  auto *eval = app.add_subcommand("eval", "Print acc_v(x) or acc_k(x)");
  eval->add_option("--value,-k,-v", value, "Truth value v or true value k")->required();
  eval->add_option("--x,-x", x, "Reported credence or estimate")->required();

  std::string checks_arg = "all";
  auto *verify = app.add_subcommand("verify", "Run verification checks");
  verify->add_option("--checks", checks_arg, "Comma-separated checks, or 'all'");

  std::string target;
  auto *convert = app.add_subcommand("convert", "Convert between Schervish and Bregman forms");
  convert->add_option("--to", target, "schervish | bregman")->required();

  std::string what;
  std::size_t n = 0;
  auto *tabulate = app.add_subcommand("tabulate", "Write a CSV of curves");
  tabulate->add_option("--what", what, "scores | entropy | divergence")->required();
  tabulate->add_option("--n", n, "Grid points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Tolerances tol;
  if (argmax_tol) {
    tol.argmax_tol = *argmax_tol;
    try {
      tol.validate();
    } catch (const std::exception &e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
  }

  if (*eval)
    return cmd_eval(spec, value, x, tol, out, err);
  if (*verify) {
    std::set<std::string> checks;
    std::stringstream ss(checks_arg);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty())
        checks.insert(item);
    return cmd_verify(spec, checks, seed, tol, out, err);
  }
  if (*convert)
    return cmd_convert(spec, target, tol, out, err);
  return cmd_tabulate(spec, what, n, out_path, tol, out, err);
}

} // namespace propscore::cli
