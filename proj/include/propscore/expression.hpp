#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace propscore {

/// Closed-form expression in a single variable.
///
/// Grammar: numbers, the variable (any of `t`, `x`, `p`), `+ - * / ^`, unary minus,
/// parentheses and the functions `ln` and `exp`. `^` binds tighter than unary minus
/// and associates to the right. Products use the convention 0 * inf = 0, so
/// `x*ln(x)` evaluates to 0 at x = 0.
class Expression {
public:
  struct Node;

  /// Throws ExpressionError with the column of the offending token.
  static Expression parse(std::string_view text);
  static Expression constant(double c);
  static Expression variable();

  double operator()(double t) const;

  /// Symbolic derivative, lightly simplified.
  Expression derivative() const;

  /// Coefficients c0, c1, ... when the expression is a polynomial in the variable.
  std::optional<std::vector<double>> polynomial() const;

  /// Round-trippable text with the variable spelled `var`.
  std::string to_string(std::string_view var = "t") const;

  std::shared_ptr<const Node> root() const { return root_; }

private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

class ExpressionError : public std::runtime_error {
public:
  ExpressionError(const std::string &what, std::size_t column)
      : std::runtime_error(what + " at column " + std::to_string(column + 1)), column_(column) {}
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// Text of the polynomial sum c_i * (var - shift)^i, with 17 significant digits.
std::string polynomial_to_string(const std::vector<double> &coeffs, std::string_view var,
                                 double shift = 0.0);

} // namespace propscore
