#include "propscore/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace propscore {

struct Expression::Node {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Ln, Exp };
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double c) { return std::make_shared<const Node>(Node{Kind::Const, c, {}, {}}); }
NodePtr make_var() { return std::make_shared<const Node>(Node{Kind::Var, 0.0, {}, {}}); }

bool is_const(const NodePtr &n, double c) { return n->kind == Kind::Const && n->value == c; }
bool is_const(const NodePtr &n) { return n->kind == Kind::Const; }

double eval(const Node &n, double t);

NodePtr make_unary(Kind kind, NodePtr a) {
  if (kind == Kind::Neg) {
    if (is_const(a))
      return make_const(-a->value);
    if (a->kind == Kind::Neg)
      return a->lhs;
  }
  auto node = std::make_shared<const Node>(Node{kind, 0.0, std::move(a), {}});
  if (is_const(node->lhs))
    return make_const(eval(*node, 0.0));
  return node;
}

NodePtr make_binary(Kind kind, NodePtr a, NodePtr b) {
  switch (kind) {
  case Kind::Add:
    if (is_const(a, 0.0))
      return b;
    if (is_const(b, 0.0))
      return a;
    break;
  case Kind::Sub:
    if (is_const(b, 0.0))
      return a;
    if (is_const(a, 0.0))
      return make_unary(Kind::Neg, b);
    break;
  case Kind::Mul:
    if (is_const(a, 0.0) || is_const(b, 0.0))
      return make_const(0.0);
    if (is_const(a, 1.0))
      return b;
    if (is_const(b, 1.0))
      return a;
    break;
  case Kind::Div:
    if (is_const(a, 0.0) && !is_const(b, 0.0))
      return make_const(0.0);
    if (is_const(b, 1.0))
      return a;
    break;
  case Kind::Pow:
    if (is_const(b, 1.0))
      return a;
    if (is_const(b, 0.0))
      return make_const(1.0);
    break;
  default:
    break;
  }
  auto node = std::make_shared<const Node>(Node{kind, 0.0, std::move(a), std::move(b)});
  if (is_const(node->lhs) && is_const(node->rhs))
    return make_const(eval(*node, 0.0));
  return node;
}

double eval(const Node &n, double t) {
  switch (n.kind) {
  case Kind::Const:
    return n.value;
  case Kind::Var:
    return t;
  case Kind::Add:
    return eval(*n.lhs, t) + eval(*n.rhs, t);
  case Kind::Sub:
    return eval(*n.lhs, t) - eval(*n.rhs, t);
  case Kind::Mul: {
    const double a = eval(*n.lhs, t);
    const double b = eval(*n.rhs, t);
    if ((a == 0.0 && std::isinf(b)) || (b == 0.0 && std::isinf(a)))
      return 0.0;
    return a * b;
  }
  case Kind::Div:
    return eval(*n.lhs, t) / eval(*n.rhs, t);
  case Kind::Pow:
    return std::pow(eval(*n.lhs, t), eval(*n.rhs, t));
  case Kind::Neg:
    return -eval(*n.lhs, t);
  case Kind::Ln:
    return std::log(eval(*n.lhs, t));
  case Kind::Exp:
    return std::exp(eval(*n.lhs, t));
  }
  return std::nan("");
}

NodePtr derive(const NodePtr &n) {
  const auto &a = n->lhs;
  const auto &b = n->rhs;
  switch (n->kind) {
  case Kind::Const:
    return make_const(0.0);
  case Kind::Var:
    return make_const(1.0);
  case Kind::Add:
    return make_binary(Kind::Add, derive(a), derive(b));
  case Kind::Sub:
    return make_binary(Kind::Sub, derive(a), derive(b));
  case Kind::Mul:
    return make_binary(Kind::Add, make_binary(Kind::Mul, derive(a), b),
                       make_binary(Kind::Mul, a, derive(b)));
  case Kind::Div:
    // (a'b - ab') / b^2
    return make_binary(Kind::Div,
                       make_binary(Kind::Sub, make_binary(Kind::Mul, derive(a), b),
                                   make_binary(Kind::Mul, a, derive(b))),
                       make_binary(Kind::Pow, b, make_const(2.0)));
  case Kind::Pow:
    if (is_const(b)) {
      const double c = b->value;
      return make_binary(Kind::Mul,
                         make_binary(Kind::Mul, make_const(c),
                                     make_binary(Kind::Pow, a, make_const(c - 1.0))),
                         derive(a));
    }
    // a^b * (b' ln a + b a'/a)
    return make_binary(Kind::Mul, n,
                       make_binary(Kind::Add, make_binary(Kind::Mul, derive(b), make_unary(Kind::Ln, a)),
                                   make_binary(Kind::Div, make_binary(Kind::Mul, b, derive(a)), a)));
  case Kind::Neg:
    return make_unary(Kind::Neg, derive(a));
  case Kind::Ln:
    return make_binary(Kind::Div, derive(a), a);
  case Kind::Exp:
    return make_binary(Kind::Mul, n, derive(a));
  }
  return make_const(0.0);
}

using Poly = std::vector<double>;

void trim(Poly &p) {
  while (p.size() > 1 && p.back() == 0.0)
    p.pop_back();
}

Poly poly_add(const Poly &a, const Poly &b, double sign) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    r[i] += sign * b[i];
  trim(r);
  return r;
}

Poly poly_mul(const Poly &a, const Poly &b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

std::optional<Poly> as_poly(const Node &n) {
  switch (n.kind) {
  case Kind::Const:
    return Poly{n.value};
  case Kind::Var:
    return Poly{0.0, 1.0};
  case Kind::Add:
  case Kind::Sub: {
    auto a = as_poly(*n.lhs);
    auto b = as_poly(*n.rhs);
    if (!a || !b)
      return std::nullopt;
    return poly_add(*a, *b, n.kind == Kind::Add ? 1.0 : -1.0);
  }
  case Kind::Mul: {
    auto a = as_poly(*n.lhs);
    auto b = as_poly(*n.rhs);
    if (!a || !b)
      return std::nullopt;
    return poly_mul(*a, *b);
  }
  case Kind::Div: {
    auto a = as_poly(*n.lhs);
    auto b = as_poly(*n.rhs);
    if (!a || !b || b->size() != 1 || (*b)[0] == 0.0)
      return std::nullopt;
    for (auto &c : *a)
      c /= (*b)[0];
    return a;
  }
  case Kind::Pow: {
    auto a = as_poly(*n.lhs);
    auto b = as_poly(*n.rhs);
    if (!a || !b || b->size() != 1)
      return std::nullopt;
    const double e = (*b)[0];
    if (e < 0 || e > 32 || e != std::floor(e))
      return std::nullopt;
    Poly r{1.0};
    for (int i = 0; i < static_cast<int>(e); ++i)
      r = poly_mul(r, *a);
    return r;
  }
  case Kind::Neg: {
    auto a = as_poly(*n.lhs);
    if (!a)
      return std::nullopt;
    for (auto &c : *a)
      c = -c;
    return a;
  }
  case Kind::Ln:
  case Kind::Exp:
    return std::nullopt;
  }
  return std::nullopt;
}

std::string number(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  std::string s = buf;
  if (c < 0)
    return "(" + s + ")";
  return s;
}

std::string render(const Node &n, std::string_view var) {
  const auto bin = [&](const char *op) {
    return "(" + render(*n.lhs, var) + " " + op + " " + render(*n.rhs, var) + ")";
  };
  switch (n.kind) {
  case Kind::Const:
    return number(n.value);
  case Kind::Var:
    return std::string(var);
  case Kind::Add:
    return bin("+");
  case Kind::Sub:
    return bin("-");
  case Kind::Mul:
    return bin("*");
  case Kind::Div:
    return bin("/");
  case Kind::Pow:
    return "(" + render(*n.lhs, var) + ")^(" + render(*n.rhs, var) + ")";
  case Kind::Neg:
    return "(-" + render(*n.lhs, var) + ")";
  case Kind::Ln:
    return "ln(" + render(*n.lhs, var) + ")";
  case Kind::Exp:
    return "exp(" + render(*n.lhs, var) + ")";
  }
  return "";
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto n = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ExpressionError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return n;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ExpressionError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+'))
        n = make_binary(Kind::Add, n, term());
      else if (accept('-'))
        n = make_binary(Kind::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (accept('*'))
        n = make_binary(Kind::Mul, n, unary());
      else if (accept('/'))
        n = make_binary(Kind::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-'))
      return make_unary(Kind::Neg, unary());
    if (accept('+'))
      return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^'))
      return make_binary(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ExpressionError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char *end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str())
        throw ExpressionError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "t" || name == "x" || name == "p")
        return make_var();
      if (name == "ln" || name == "exp") {
        expect('(');
        auto arg = expr();
        expect(')');
        return make_unary(name == "ln" ? Kind::Ln : Kind::Exp, arg);
      }
      throw ExpressionError("unknown identifier '" + std::string(name) + "'", start);
    }
    if (accept('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    throw ExpressionError("unexpected '" + std::string(1, c) + "'", pos_);
  }
};

} // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }
Expression Expression::constant(double c) { return Expression(make_const(c)); }
Expression Expression::variable() { return Expression(make_var()); }

double Expression::operator()(double t) const { return eval(*root_, t); }

Expression Expression::derivative() const { return Expression(derive(root_)); }

std::optional<std::vector<double>> Expression::polynomial() const { return as_poly(*root_); }

std::string Expression::to_string(std::string_view var) const { return render(*root_, var); }

std::string polynomial_to_string(const std::vector<double> &coeffs, std::string_view var,
                                 double shift) {
  const std::string base =
      shift == 0.0 ? std::string(var) : "(" + std::string(var) + " - " + number(shift) + ")";
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0)
      continue;
    if (!out.empty())
      out += " + ";
    out += number(coeffs[i]);
    if (i == 1)
      out += "*" + base;
    else if (i > 1)
      out += "*" + base + "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

} // namespace propscore
