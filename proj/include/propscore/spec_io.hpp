#pragma once

#include "propscore/bregman.hpp"
#include "propscore/credence_score.hpp"
#include "propscore/errors.hpp"
#include "propscore/estimate_score.hpp"
#include "propscore/expression.hpp"
#include "propscore/weight_measure.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace propscore {

using Json = nlohmann::json;

/// Malformed or invalid input document. `key` names the JSON member at fault, if known.
class SpecError : public Error {
public:
  SpecError(const std::string &what, std::string key = {}) : Error(what), key_(std::move(key)) {}
  const std::string &key() const noexcept { return key_; }

private:
  std::string key_;
};

/// {"kind": "constant", "value": c} or {"kind": "expr", "value": "<expression in t>"}.
struct DensitySpec {
  std::optional<double> constant;
  std::optional<Expression> expr;

  RealFn fn() const;
  Json to_json() const;
};

/// {"domain": [lo, hi], "density": {...}, "atoms": [[loc, mass], ...]}
struct MeasureSpec {
  Interval domain{0.0, 1.0};
  DensitySpec density;
  std::vector<Atom> atoms;

  WeightMeasure build() const;
  Json to_json() const;
};

/// Entropy document. Three shapes are accepted:
///   {"phi": expr, "dphi": expr, "ddphi": expr | null, "domain": [lo, hi]}  (dphi derived if absent)
///   {"expr": expr}                                     (domain [0, 1], both derivatives derived)
///   {"mass": expr, "domain": [lo, hi], "anchor": a}    (phi'' = mass, phi(a) = phi'(a) = 0)
struct EntropySpec {
  Interval domain{0.0, 1.0};
  std::optional<Expression> phi;
  std::optional<Expression> dphi;
  std::optional<Expression> ddphi;
  std::optional<Expression> mass;
  std::optional<double> anchor;

  Entropy build(const Tolerances &tol = {}) const;
  /// Expression for the second derivative: ddphi, else d/dx dphi, else the mass.
  Expression curvature_expr() const;
  Json to_json() const;
};

/// {"form": "schervish"|"bregman"|"builtin", "measure": ..., "entropy": ..., "builtin": name,
///  "anchors": [a0, a1]}. Builtins: brier, log, improper-linear, antisymmetric-linear.
struct CredenceSpec {
  std::string form;
  std::optional<MeasureSpec> measure;
  std::optional<EntropySpec> entropy;
  std::string builtin;
  std::optional<std::pair<double, double>> anchors;

  CredenceScore build(const Tolerances &tol = {}) const;
  /// The Schervish measure behind the score: the given one, or the canonical one of a builtin.
  std::optional<MeasureSpec> schervish_measure() const;
  Json to_json() const;
};

/// {"measure": ..., "hull": [lo, hi], "anchors": {"default": a} | {"<k>": a, ...},
///  "variable": <variable>, "per_value_measures": {"<k>": <measure>}}.
/// The last two members are optional; the variable feeds `verify`.
struct EstimateSpec {
  MeasureSpec measure;
  Interval hull{0.0, 1.0};
  AnchorTable anchors;
  std::map<double, MeasureSpec> per_value;
  std::optional<RandomVariable> variable;

  EstimateScore build(const Tolerances &tol = {}) const;
  /// The spec's variable, or one taking the hull ends and midpoint.
  RandomVariable variable_or_default() const;
  Json to_json() const;
};

using ScoreSpec = std::variant<CredenceSpec, EstimateSpec>;

MeasureSpec parse_measure(const Json &j);
EntropySpec parse_entropy(const Json &j);
/// Documents with a "hull" member are estimate specs; everything else is a credence spec.
ScoreSpec parse_score_spec(const Json &j);

/// {"outcomes": [{"label": s, "value": v}, ...]}
RandomVariable parse_variable(const Json &j);
Json to_json(const RandomVariable &v);
/// {"weights": {label: w, ...}}
FiniteProbability parse_probability(const Json &j);
Json to_json(const FiniteProbability &p);
Json to_json(const AnchorTable &a);

} // namespace propscore
