#include "propscore/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace propscore {

namespace {

const Json &member(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw SpecError(std::string("missing member \"") + key + "\"", key);
  return j.at(key);
}

double number(const Json &j, const std::string &key) {
  if (!j.is_number())
    throw SpecError("\"" + key + "\" must be a number", key);
  return j.get<double>();
}

Interval interval(const Json &j, const std::string &key) {
  if (!j.is_array() || j.size() != 2)
    throw SpecError("\"" + key + "\" must be a two-element array [lo, hi]", key);
  const Interval out{number(j[0], key), number(j[1], key)};
  if (!(out.lo < out.hi))
    throw SpecError("\"" + key + "\" must satisfy lo < hi", key);
  return out;
}

Expression expression(const Json &j, const std::string &key) {
  if (!j.is_string())
    throw SpecError("\"" + key + "\" must be an expression string", key);
  try {
    return Expression::parse(j.get<std::string>());
  } catch (const ExpressionError &e) {
    throw SpecError("\"" + key + "\": " + e.what(), key);
  }
}

double key_number(const std::string &text, const std::string &key) {
  const char *begin = text.c_str();
  char *end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw SpecError("\"" + text + "\" is not a number", key);
  return v;
}

std::string key_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json interval_json(const Interval &i) { return Json::array({i.lo, i.hi}); }

template <class F> auto rethrow_as_spec(const std::string &key, F &&f) {
  try {
    return f();
  } catch (const SpecError &) {
    throw;
  } catch (const Error &e) {
    throw SpecError(e.what(), key);
  }
}

} // namespace

RealFn DensitySpec::fn() const {
  if (constant)
    return [c = *constant](double) { return c; };
  return [e = *expr](double t) { return e(t); };
}

Json DensitySpec::to_json() const {
  if (constant)
    return {{"kind", "constant"}, {"value", *constant}};
  return {{"kind", "expr"}, {"value", expr->to_string("t")}};
}

WeightMeasure MeasureSpec::build() const {
  return rethrow_as_spec("density", [&] { return WeightMeasure(domain, density.fn(), atoms); });
}

Json MeasureSpec::to_json() const {
  Json atoms_json = Json::array();
  for (const auto &a : atoms)
    atoms_json.push_back({a.location, a.mass});
  return {{"domain", interval_json(domain)}, {"density", density.to_json()}, {"atoms", atoms_json}};
}

MeasureSpec parse_measure(const Json &j) {
  MeasureSpec out;
  out.domain = interval(member(j, "domain"), "domain");
  const Json &d = member(j, "density");
  const Json &kind = member(d, "kind");
  if (kind == "constant") {
    out.density.constant = number(member(d, "value"), "value");
  } else if (kind == "expr") {
    out.density.expr = expression(member(d, "value"), "value");
  } else {
    throw SpecError("density kind must be \"constant\" or \"expr\"", "kind");
  }
  if (j.contains("atoms")) {
    const Json &atoms = j.at("atoms");
    if (!atoms.is_array())
      throw SpecError("\"atoms\" must be an array of [location, mass] pairs", "atoms");
    for (const auto &a : atoms) {
      if (!a.is_array() || a.size() != 2)
        throw SpecError("each atom must be a [location, mass] pair", "atoms");
      out.atoms.push_back({number(a[0], "atoms"), number(a[1], "atoms")});
    }
  }
  // Validate now so errors point at the document.
  if (out.density.constant && !(*out.density.constant >= 0.0))
    throw SpecError("constant density must be non-negative", "value");
  out.build();
  return out;
}

Entropy EntropySpec::build(const Tolerances &tol) const {
  return rethrow_as_spec(mass ? "mass" : "phi", [&]() -> Entropy {
    if (mass)
      return entropy_from_mass([m = *mass](double t) { return m(t); }, domain.lo, domain.hi, anchor, tol);
    std::optional<RealFn> dd;
    if (ddphi)
      dd = [e = *ddphi](double t) { return e(t); };
    return Entropy([e = *phi](double t) { return e(t); }, [e = *dphi](double t) { return e(t); }, dd, domain,
                   tol);
  });
}

Expression EntropySpec::curvature_expr() const {
  if (mass)
    return *mass;
  if (ddphi)
    return *ddphi;
  return dphi->derivative();
}

Json EntropySpec::to_json() const {
  if (mass) {
    Json j = {{"mass", mass->to_string("t")}, {"domain", interval_json(domain)}};
    if (anchor)
      j["anchor"] = *anchor;
    return j;
  }
  return {{"phi", phi->to_string("x")},
          {"dphi", dphi->to_string("x")},
          {"ddphi", ddphi ? Json(ddphi->to_string("x")) : Json(nullptr)},
          {"domain", interval_json(domain)}};
}

EntropySpec parse_entropy(const Json &j) {
  EntropySpec out;
  if (!j.is_object())
    throw SpecError("entropy must be an object", "entropy");
  if (j.contains("mass")) {
    out.mass = expression(j.at("mass"), "mass");
    out.domain = interval(member(j, "domain"), "domain");
    if (j.contains("anchor"))
      out.anchor = number(j.at("anchor"), "anchor");
  } else if (j.contains("expr")) {
    out.phi = expression(j.at("expr"), "expr");
    out.dphi = out.phi->derivative();
    out.ddphi = out.dphi->derivative();
    if (j.contains("domain"))
      out.domain = interval(j.at("domain"), "domain");
  } else {
    out.phi = expression(member(j, "phi"), "phi");
    out.dphi = j.contains("dphi") ? expression(j.at("dphi"), "dphi") : out.phi->derivative();
    if (j.contains("ddphi") && !j.at("ddphi").is_null())
      out.ddphi = expression(j.at("ddphi"), "ddphi");
    out.domain = interval(member(j, "domain"), "domain");
  }
  out.build();
  return out;
}

namespace {

CredenceScore with_anchors(const CredenceScore &s, double a0, double a1) {
  const double shift0 = a0 - s.anchor0();
  const double shift1 = a1 - s.anchor1();
  if (shift0 == 0.0 && shift1 == 0.0)
    return s;
  return CredenceScore([s, shift0](double x) { return s.acc0(x) + shift0; },
                       [s, shift1](double x) { return s.acc1(x) + shift1; }, a0, a1, s.measure(), s.entropy());
}

} // namespace

CredenceScore CredenceSpec::build(const Tolerances &tol) const {
  if (form == "schervish") {
    const auto [a0, a1] = anchors.value_or(std::pair{0.0, 0.0});
    return rethrow_as_spec("measure", [&] { return from_measure(measure->build(), a0, a1, tol); });
  }
  if (form == "bregman") {
    auto s = rethrow_as_spec("entropy", [&] { return from_entropy(entropy->build(tol)); });
    return anchors ? with_anchors(s, anchors->first, anchors->second) : s;
  }
  CredenceScore s = builtin == "brier"          ? brier()
                    : builtin == "log"          ? log_score()
                    : builtin == "improper-linear" ? improper_linear_score()
                                                   : antisymmetric_linear_score();
  return anchors ? with_anchors(s, anchors->first, anchors->second) : s;
}

std::optional<MeasureSpec> CredenceSpec::schervish_measure() const {
  if (form == "schervish")
    return measure;
  if (form == "builtin" && builtin == "brier")
    return MeasureSpec{{0.0, 1.0}, {2.0, std::nullopt}, {}};
  if (form == "builtin" && builtin == "log")
    return MeasureSpec{{0.0, 1.0}, {std::nullopt, Expression::parse("1/(t*(1-t))")}, {}};
  return std::nullopt;
}

Json CredenceSpec::to_json() const {
  Json j = {{"form", form}};
  if (measure)
    j["measure"] = measure->to_json();
  if (entropy)
    j["entropy"] = entropy->to_json();
  if (form == "builtin")
    j["builtin"] = builtin;
  if (anchors)
    j["anchors"] = Json::array({anchors->first, anchors->second});
  return j;
}

EstimateScore EstimateSpec::build(const Tolerances &tol) const {
  return rethrow_as_spec("measure", [&] {
    std::map<double, WeightMeasure> overrides;
    for (const auto &[k, m] : per_value)
      overrides.emplace(k, m.build());
    return EstimateScore(measure.build(), hull, anchors, std::move(overrides), tol);
  });
}

RandomVariable EstimateSpec::variable_or_default() const {
  if (variable)
    return *variable;
  return RandomVariable({{"lo", hull.lo}, {"mid", hull.midpoint()}, {"hi", hull.hi}});
}

Json EstimateSpec::to_json() const {
  Json j = {{"measure", measure.to_json()}, {"hull", interval_json(hull)}, {"anchors", propscore::to_json(anchors)}};
  if (!per_value.empty()) {
    Json pv = Json::object();
    for (const auto &[k, m] : per_value)
      pv[key_text(k)] = m.to_json();
    j["per_value_measures"] = pv;
  }
  if (variable)
    j["variable"] = propscore::to_json(*variable);
  return j;
}

Json to_json(const AnchorTable &a) {
  Json j = Json::object();
  if (a.fallback)
    j["default"] = *a.fallback;
  for (const auto &[k, v] : a.values)
    j[key_text(k)] = v;
  return j;
}

namespace {

AnchorTable parse_anchors(const Json &j) {
  if (!j.is_object())
    throw SpecError("\"anchors\" must be an object", "anchors");
  AnchorTable out;
  out.fallback.reset();
  for (const auto &[key, value] : j.items()) {
    const double a = number(value, key);
    if (key == "default")
      out.fallback = a;
    else
      out.values[key_number(key, "anchors")] = a;
  }
  return out;
}

CredenceSpec parse_credence(const Json &j) {
  CredenceSpec out;
  const Json &form = member(j, "form");
  if (!form.is_string())
    throw SpecError("\"form\" must be a string", "form");
  out.form = form.get<std::string>();
  if (out.form == "schervish") {
    out.measure = parse_measure(member(j, "measure"));
    if (out.measure->domain.lo != 0.0 || out.measure->domain.hi != 1.0)
      throw SpecError("credence measures must have domain [0, 1]", "domain");
  } else if (out.form == "bregman") {
    out.entropy = parse_entropy(member(j, "entropy"));
    if (out.entropy->domain.lo != 0.0 || out.entropy->domain.hi != 1.0)
      throw SpecError("credence entropies must have domain [0, 1]", "domain");
  } else if (out.form == "builtin") {
    const Json &b = member(j, "builtin");
    out.builtin = b.is_string() ? b.get<std::string>() : "";
    if (out.builtin != "brier" && out.builtin != "log" && out.builtin != "improper-linear" &&
        out.builtin != "antisymmetric-linear")
      throw SpecError("unknown builtin score", "builtin");
  } else {
    throw SpecError("\"form\" must be \"schervish\", \"bregman\" or \"builtin\"", "form");
  }
  if (j.contains("anchors")) {
    const Json &a = j.at("anchors");
    if (!a.is_array() || a.size() != 2)
      throw SpecError("\"anchors\" must be [a0, a1]", "anchors");
    out.anchors = std::pair{number(a[0], "anchors"), number(a[1], "anchors")};
  }
  out.build();
  return out;
}

EstimateSpec parse_estimate(const Json &j) {
  EstimateSpec out;
  out.measure = parse_measure(member(j, "measure"));
  out.hull = interval(member(j, "hull"), "hull");
  if (j.contains("anchors"))
    out.anchors = parse_anchors(j.at("anchors"));
  if (j.contains("per_value_measures")) {
    const Json &pv = j.at("per_value_measures");
    if (!pv.is_object())
      throw SpecError("\"per_value_measures\" must be an object", "per_value_measures");
    for (const auto &[key, value] : pv.items())
      out.per_value.emplace(key_number(key, "per_value_measures"), parse_measure(value));
  }
  if (j.contains("variable")) {
    out.variable = parse_variable(j.at("variable"));
    const Interval h = out.variable->hull();
    if (h.lo != out.hull.lo || h.hi != out.hull.hi)
      throw SpecError("\"hull\" must equal the convex hull of the variable's values", "hull");
  }
  out.build();
  return out;
}

} // namespace

ScoreSpec parse_score_spec(const Json &j) {
  if (!j.is_object())
    throw SpecError("score spec must be a JSON object");
  if (j.contains("hull"))
    return parse_estimate(j);
  return parse_credence(j);
}

RandomVariable parse_variable(const Json &j) {
  const Json &outs = member(j, "outcomes");
  if (!outs.is_array())
    throw SpecError("\"outcomes\" must be an array", "outcomes");
  std::vector<Outcome> outcomes;
  for (const auto &o : outs) {
    const Json &label = member(o, "label");
    if (!label.is_string())
      throw SpecError("\"label\" must be a string", "label");
    outcomes.push_back({label.get<std::string>(), number(member(o, "value"), "value")});
  }
  return rethrow_as_spec("outcomes", [&] { return RandomVariable(std::move(outcomes)); });
}

Json to_json(const RandomVariable &v) {
  Json outs = Json::array();
  for (const auto &o : v.outcomes())
    outs.push_back({{"label", o.label}, {"value", o.value}});
  return {{"outcomes", outs}};
}

FiniteProbability parse_probability(const Json &j) {
  const Json &w = member(j, "weights");
  if (!w.is_object())
    throw SpecError("\"weights\" must be an object", "weights");
  std::map<std::string, double> weights;
  for (const auto &[label, value] : w.items())
    weights[label] = number(value, label);
  return rethrow_as_spec("weights", [&] { return FiniteProbability(std::move(weights)); });
}

Json to_json(const FiniteProbability &p) {
  Json w = Json::object();
  for (const auto &[label, value] : p.weights())
    w[label] = value;
  return {{"weights", w}};
}

} // namespace propscore
