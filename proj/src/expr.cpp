#include "geoverify/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <functional>

namespace geoverify {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_literal(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Literal;
  n->literal = v;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool has_coordinates(const ExprNode& n) {
  if (n.op == Op::Coord) return true;
  if (n.lhs && has_coordinates(*n.lhs)) return true;
  return n.rhs && has_coordinates(*n.rhs);
}

struct FunctionName {
  const char* name;
  Op op;
};

constexpr FunctionName kFunctions[] = {{"exp", Op::Exp},   {"log", Op::Log},   {"sin", Op::Sin},  {"cos", Op::Cos},
                                       {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"sqrt", Op::Sqrt}};

const char* function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return nullptr;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords, std::span<const std::string> params)
      : text_(text), coords_(coords), params_(params) {}

  NodePtr run() {
    check_balance();
    skip_space();
    if (at_end()) throw ParseError("empty expression");
    NodePtr e = parse_sum();
    skip_space();
    if (!at_end()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::span<const std::string> coords_;
  std::span<const std::string> params_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void check_balance() const {
    int depth = 0;
    for (char c : text_) {
      if (c == '(') ++depth;
      if (c == ')' && --depth < 0) break;
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in \"" + std::string(text_) + "\"");
  }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    while (true) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        NodePtr den = parse_unary();
        if (den->op == Op::Literal && den->literal == 0.0) fail("division by a literal zero");
        lhs = make_binary(Op::Div, lhs, den);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    NodePtr exponent = parse_exponent();
    if (has_coordinates(*exponent)) fail("exponent must not depend on coordinates");
    return make_binary(Op::Pow, base, exponent);
  }

  NodePtr parse_exponent() {
    if (accept('-')) return make_unary(Op::Neg, parse_exponent());
    return parse_power();
  }

  NodePtr parse_primary() {
    skip_space();
    if (at_end()) fail("empty operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      skip_space();
      if (!at_end() && text_[pos_] == ')') fail("empty operand");
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("unbalanced parentheses");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("empty operand");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        pos_ = save;
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return make_literal(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (!at_end() && text_[pos_] == '(') {
      for (const auto& f : kFunctions) {
        if (name == f.name) {
          ++pos_;
          skip_space();
          if (!at_end() && text_[pos_] == ')') fail("empty operand");
          NodePtr arg = parse_sum();
          if (!accept(')')) fail("unbalanced parentheses");
          return make_unary(f.op, arg);
        }
      }
      fail("unknown function '" + name + "'");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) return Expr::coordinate(static_cast<int>(i), name).root();
    }
    for (const auto& p : params_) {
      if (p == name) return Expr::parameter(name).root();
    }
    pos_ = start;
    fail("unknown symbol '" + name + "'");
  }
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case Op::Literal:
      if (n.literal < 0.0 || std::signbit(n.literal)) {
        out += "(-" + format_number(-n.literal) + ")";
      } else {
        out += format_number(n.literal);
      }
      return;
    case Op::Coord:
    case Op::Param:
      out += n.name;
      return;
    case Op::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
      const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : n.op == Op::Div ? " / " : " ^ ";
      out += "(";
      print(*n.lhs, out);
      out += sym;
      print(*n.rhs, out);
      out += ")";
      return;
    }
    default:
      out += function_name(n.op);
      out += "(";
      print(*n.lhs, out);
      out += ")";
      return;
  }
}

int node_depth(const ExprNode& n) {
  if (!n.lhs) return 0;
  int d = node_depth(*n.lhs);
  if (n.rhs) d = std::max(d, node_depth(*n.rhs));
  return d + 1;
}

}  // namespace

namespace detail {

double lookup_param(const ParamMap& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw EvalError("unbound parameter '" + name + "'");
  return it->second;
}

void domain_error(const char* what, double at) {
  throw EvalError(std::string(what) + " (argument " + format_number(at) + ")");
}

}  // namespace detail

Expr::Expr() : root_(make_literal(0.0)) {}

Expr Expr::parse(std::string_view text, std::span<const std::string> coords, std::span<const std::string> params) {
  return Expr(Parser(text, coords, params).run());
}

Expr Expr::constant(double v) { return Expr(make_literal(v)); }

Expr Expr::coordinate(int index, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Coord;
  n->index = index;
  n->name = std::move(name);
  return Expr(n);
}

Expr Expr::parameter(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Param;
  n->name = std::move(name);
  return Expr(n);
}

bool Expr::depends_on_coordinates() const { return has_coordinates(*root_); }

int Expr::depth() const { return node_depth(*root_); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

// Builders fold literal zeros and ones so that generated component tables stay readable.
Expr operator-(const Expr& a) {
  if (a.is_literal()) return Expr::constant(-a.node().literal);
  return Expr(make_unary(Op::Neg, a.root()));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_literal() && b.is_literal()) return Expr::constant(a.node().literal + b.node().literal);
  return Expr(make_binary(Op::Add, a.root(), b.root()));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_literal() && b.is_literal()) return Expr::constant(a.node().literal - b.node().literal);
  return Expr(make_binary(Op::Sub, a.root(), b.root()));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_literal() && b.is_literal()) return Expr::constant(a.node().literal * b.node().literal);
  return Expr(make_binary(Op::Mul, a.root(), b.root()));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw ParseError("division by a literal zero");
  if (a.is_zero()) return a;
  if (b.is_one()) return a;
  return Expr(make_binary(Op::Div, a.root(), b.root()));
}

Expr pow(const Expr& a, double exponent) {
  if (exponent == 1.0) return a;
  if (exponent == 0.0) return Expr::constant(1.0);
  return Expr(make_binary(Op::Pow, a.root(), make_literal(exponent)));
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1.0);
  return Expr(make_unary(Op::Exp, a.root()));
}

Expr log(const Expr& a) { return Expr(make_unary(Op::Log, a.root())); }
Expr sin(const Expr& a) { return Expr(make_unary(Op::Sin, a.root())); }
Expr cos(const Expr& a) { return Expr(make_unary(Op::Cos, a.root())); }

Expr rebind(const Expr& e, std::span<const std::string> coords, std::span<const std::string> params) {
  return Expr::parse(e.to_string(), coords, params);
}

Jet2 eval_jet2(const Expr& e, std::span<const double> point, const ParamMap& params) {
  const int dim = static_cast<int>(point.size());
  if (dim > kMaxDim) throw PreconditionError("chart dimension exceeds kMaxDim");
  std::vector<Jet2> seeds;
  seeds.reserve(point.size());
  for (int i = 0; i < dim; ++i) seeds.push_back(Jet2::variable(point[static_cast<std::size_t>(i)], i, dim));
  if (seeds.empty()) return detail::eval_node<Jet2>(e.node(), {}, params, Jet2(0.0, 0));
  Jet2 out = e.evaluate<Jet2>(seeds, params);
  // Rounding can split mixed partials by an ulp; the stored Hessian is exactly symmetric.
  const JetMatrix sym = 0.5 * (out.hessian + out.hessian.transpose());
  out.hessian = sym;
  return out;
}

double eval_value(const Expr& e, std::span<const double> point, const ParamMap& params) {
  return e.evaluate<double>(point, params);
}

}  // namespace geoverify
