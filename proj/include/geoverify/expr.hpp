#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoverify/errors.hpp"
#include "geoverify/jet.hpp"

namespace geoverify {

using ParamMap = std::map<std::string, double>;

enum class Op { Literal, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

struct ExprNode {
  Op op = Op::Literal;
  double literal = 0.0;
  int index = -1;    // coordinate slot for Op::Coord
  std::string name;  // symbol name for Op::Coord / Op::Param
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

/// Immutable expression tree over chart coordinates and named parameters.
///
/// Trees are shared by pointer; copying an Expr is cheap and never mutates the
/// underlying nodes.
class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  /// Parses `text` with the usual precedence: ^ (right-assoc) > unary - > * / > + -.
  static Expr parse(std::string_view text, std::span<const std::string> coords,
                    std::span<const std::string> params);

  static Expr constant(double v);
  static Expr coordinate(int index, std::string name);
  static Expr parameter(std::string name);

  const ExprNode& node() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root() const { return root_; }

  bool is_literal() const { return root_->op == Op::Literal; }
  bool is_zero() const { return is_literal() && root_->literal == 0.0; }
  bool is_one() const { return is_literal() && root_->literal == 1.0; }
  bool depends_on_coordinates() const;

  /// Number of operator levels on the longest root-to-leaf path (leaves count 0).
  int depth() const;

  /// Fully parenthesised text that parses back to an equivalent tree.
  std::string to_string() const;

  /// Evaluates with scalar type T; `coords` holds one already-seeded value per coordinate.
  template <class T>
  T evaluate(std::span<const T> coords, const ParamMap& params) const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& a, double exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);

/// Re-parses `e` inside another chart (coordinates and parameters matched by name).
Expr rebind(const Expr& e, std::span<const std::string> coords, std::span<const std::string> params);

/// Value, gradient and Hessian of `e` at `point` with exact forward-mode propagation.
Jet2 eval_jet2(const Expr& e, std::span<const double> point, const ParamMap& params);

double eval_value(const Expr& e, std::span<const double> point, const ParamMap& params);

// ---------------------------------------------------------------------------

namespace detail {

template <class T>
struct ScalarOps {
  static T constant(double v, const T&) { return T(v); }
};

template <>
struct ScalarOps<Jet2> {
  static Jet2 constant(double v, const Jet2& like) { return Jet2::constant(v, like.dim()); }
};

double lookup_param(const ParamMap& params, const std::string& name);
[[noreturn]] void domain_error(const char* what, double at);

template <class T>
T eval_node(const ExprNode& n, std::span<const T> coords, const ParamMap& params, const T& like) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  switch (n.op) {
    case Op::Literal:
      return ScalarOps<T>::constant(n.literal, like);
    case Op::Coord:
      return coords[static_cast<std::size_t>(n.index)];
    case Op::Param:
      return ScalarOps<T>::constant(lookup_param(params, n.name), like);
    case Op::Neg:
      return -eval_node(*n.lhs, coords, params, like);
    case Op::Add:
      return eval_node(*n.lhs, coords, params, like) + eval_node(*n.rhs, coords, params, like);
    case Op::Sub:
      return eval_node(*n.lhs, coords, params, like) - eval_node(*n.rhs, coords, params, like);
    case Op::Mul:
      return eval_node(*n.lhs, coords, params, like) * eval_node(*n.rhs, coords, params, like);
    case Op::Div: {
      T den = eval_node(*n.rhs, coords, params, like);
      if (value_of(den) == 0) domain_error("division by zero", 0.0);
      return eval_node(*n.lhs, coords, params, like) / den;
    }
    case Op::Pow: {
      // Exponents never depend on coordinates (enforced at parse time).
      const double c = eval_node<double>(*n.rhs, std::span<const double>{}, params, 0.0);
      T base = eval_node(*n.lhs, coords, params, like);
      const auto b = static_cast<double>(value_of(base));
      const bool integral = std::floor(c) == c;
      if (!integral && b < 0.0) domain_error("non-integer power of a negative base", b);
      if (c < 0.0 && b == 0.0) domain_error("negative power of zero", b);
      if constexpr (std::is_same_v<T, Jet2>) {
        return pow(base, c);
      } else {
        return pow(base, static_cast<T>(c));
      }
    }
    case Op::Exp:
      return exp(eval_node(*n.lhs, coords, params, like));
    case Op::Log: {
      T a = eval_node(*n.lhs, coords, params, like);
      if (value_of(a) <= 0) domain_error("log of a non-positive value", static_cast<double>(value_of(a)));
      return log(a);
    }
    case Op::Sin:
      return sin(eval_node(*n.lhs, coords, params, like));
    case Op::Cos:
      return cos(eval_node(*n.lhs, coords, params, like));
    case Op::Sinh:
      return sinh(eval_node(*n.lhs, coords, params, like));
    case Op::Cosh:
      return cosh(eval_node(*n.lhs, coords, params, like));
    case Op::Sqrt: {
      T a = eval_node(*n.lhs, coords, params, like);
      if (value_of(a) <= 0) domain_error("sqrt of a non-positive value", static_cast<double>(value_of(a)));
      return sqrt(a);
    }
  }
  domain_error("corrupt expression node", 0.0);
}

}  // namespace detail

template <class T>
T Expr::evaluate(std::span<const T> coords, const ParamMap& params) const {
  const T like = coords.empty() ? T{} : coords[0];
  return detail::eval_node<T>(*root_, coords, params, like);
}

}  // namespace geoverify
