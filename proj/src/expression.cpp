// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "geohydro/error.hpp"

namespace geohydro {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };
enum class Fn { Sin, Cos, Tan, Asin, Acos, Atan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  int slot = -1;
  Fn fn = Fn::Sin;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_var(int slot) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Var;
  n->slot = slot;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  // Light folding keeps symbolic derivatives from growing without bound.
  if (a->op == Op::Const && b->op == Op::Const) {
    switch (op) {
      case Op::Add: return make_const(a->value + b->value);
      case Op::Sub: return make_const(a->value - b->value);
      case Op::Mul: return make_const(a->value * b->value);
      case Op::Div: return make_const(a->value / b->value);
      case Op::Pow: return make_const(std::pow(a->value, b->value));
      default: break;
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0)) return a;
      break;
    case Op::Mul:
      if (is_const(a, 0) || is_const(b, 0)) return make_const(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::Div:
      if (is_const(a, 0)) return make_const(0);
      if (is_const(b, 1)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 0)) return make_const(1);
      if (is_const(b, 1)) return a;
      break;
    default: break;
  }
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_neg(NodePtr a) {
  if (a->op == Op::Const) return make_const(-a->value);
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Neg;
  n->a = std::move(a);
  return n;
}

NodePtr make_fn(Fn fn, NodePtr a) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Func;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

double apply_fn(Fn fn, double x) {
  switch (fn) {
    case Fn::Sin: return std::sin(x);
    case Fn::Cos: return std::cos(x);
    case Fn::Tan: return std::tan(x);
    case Fn::Asin: return std::asin(x);
    case Fn::Acos: return std::acos(x);
    case Fn::Atan: return std::atan(x);
    case Fn::Sinh: return std::sinh(x);
    case Fn::Cosh: return std::cosh(x);
    case Fn::Tanh: return std::tanh(x);
    case Fn::Exp: return std::exp(x);
    case Fn::Log: return std::log(x);
    case Fn::Sqrt: return std::sqrt(x);
    case Fn::Abs: return std::abs(x);
  }
  return 0.0;
}

double eval(const Expression::Node& n, std::span<const double> vars) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (n.slot >= static_cast<int>(vars.size())) {
        throw InvalidArgument("expression variable slot out of range");
      }
      return vars[n.slot];
    case Op::Neg: return -eval(*n.a, vars);
    case Op::Add: return eval(*n.a, vars) + eval(*n.b, vars);
    case Op::Sub: return eval(*n.a, vars) - eval(*n.b, vars);
    case Op::Mul: return eval(*n.a, vars) * eval(*n.b, vars);
    case Op::Div: return eval(*n.a, vars) / eval(*n.b, vars);
    case Op::Pow: return std::pow(eval(*n.a, vars), eval(*n.b, vars));
    case Op::Func: return apply_fn(n.fn, eval(*n.a, vars));
  }
  return 0.0;
}

bool depends_on_any(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::Var) return true;
  return depends_on_any(n->a) || depends_on_any(n->b);
}

NodePtr diff(const NodePtr& n, int slot) {
  switch (n->op) {
    case Op::Const: return make_const(0);
    case Op::Var: return make_const(n->slot == slot ? 1 : 0);
    case Op::Neg: return make_neg(diff(n->a, slot));
    case Op::Add: return make_binary(Op::Add, diff(n->a, slot), diff(n->b, slot));
    case Op::Sub: return make_binary(Op::Sub, diff(n->a, slot), diff(n->b, slot));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, diff(n->a, slot), n->b),
                         make_binary(Op::Mul, n->a, diff(n->b, slot)));
    case Op::Div: {
      auto num = make_binary(Op::Sub, make_binary(Op::Mul, diff(n->a, slot), n->b),
                             make_binary(Op::Mul, n->a, diff(n->b, slot)));
      return make_binary(Op::Div, num, make_binary(Op::Mul, n->b, n->b));
    }
    case Op::Pow: {
      if (!depends_on_any(n->b)) {
        auto reduced = make_binary(Op::Pow, n->a, make_binary(Op::Sub, n->b, make_const(1)));
        return make_binary(Op::Mul, make_binary(Op::Mul, n->b, reduced), diff(n->a, slot));
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      auto t1 = make_binary(Op::Mul, diff(n->b, slot), make_fn(Fn::Log, n->a));
      auto t2 = make_binary(Op::Div, make_binary(Op::Mul, n->b, diff(n->a, slot)), n->a);
      return make_binary(Op::Mul, n, make_binary(Op::Add, t1, t2));
    }
    case Op::Func: {
      const auto& a = n->a;
      NodePtr outer;
      switch (n->fn) {
        case Fn::Sin: outer = make_fn(Fn::Cos, a); break;
        case Fn::Cos: outer = make_neg(make_fn(Fn::Sin, a)); break;
        case Fn::Tan: {
          auto c = make_fn(Fn::Cos, a);
          outer = make_binary(Op::Div, make_const(1), make_binary(Op::Mul, c, c));
          break;
        }
        case Fn::Asin:
        case Fn::Acos: {
          auto s = make_fn(Fn::Sqrt, make_binary(Op::Sub, make_const(1), make_binary(Op::Mul, a, a)));
          outer = make_binary(Op::Div, make_const(n->fn == Fn::Asin ? 1 : -1), s);
          break;
        }
        case Fn::Atan:
          outer = make_binary(Op::Div, make_const(1),
                              make_binary(Op::Add, make_const(1), make_binary(Op::Mul, a, a)));
          break;
        case Fn::Sinh: outer = make_fn(Fn::Cosh, a); break;
        case Fn::Cosh: outer = make_fn(Fn::Sinh, a); break;
        case Fn::Tanh: {
          auto c = make_fn(Fn::Cosh, a);
          outer = make_binary(Op::Div, make_const(1), make_binary(Op::Mul, c, c));
          break;
        }
        case Fn::Exp: outer = n; break;
        case Fn::Log: outer = make_binary(Op::Div, make_const(1), a); break;
        case Fn::Sqrt: outer = make_binary(Op::Div, make_const(0.5), n); break;
        case Fn::Abs: outer = make_binary(Op::Div, a, n); break;
      }
      return make_binary(Op::Mul, outer, diff(a, slot));
    }
  }
  return make_const(0);
}

class Parser {
 public:
  Parser(const std::string& text, const Expression::Bindings& bindings)
      : s_(text), bindings_(bindings) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("expression \"" + s_ + "\": " + msg + " at offset " +
                          std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = s_.substr(start, pos_ - start);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      static const std::pair<const char*, Fn> kFns[] = {
          {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"asin", Fn::Asin},
          {"acos", Fn::Acos}, {"atan", Fn::Atan}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
          {"tanh", Fn::Tanh}, {"exp", Fn::Exp},   {"log", Fn::Log},   {"sqrt", Fn::Sqrt},
          {"abs", Fn::Abs}};
      for (const auto& [fname, fn] : kFns) {
        if (name == fname) {
          accept('(');
          auto arg = expr();
          if (!accept(')')) fail("expected ')' after function argument");
          return make_fn(fn, arg);
        }
      }
      fail("unknown function '" + name + "'");
    }
    if (name == "pi") return make_const(std::numbers::pi);
    if (name == "e") return make_const(std::numbers::e);
    for (const auto& [vname, slot] : bindings_) {
      if (vname == name) return make_var(slot);
    }
    fail("unknown identifier '" + name + "'");
  }

  const std::string& s_;
  const Expression::Bindings& bindings_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : root_(make_const(0)), text_("0") {}

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression Expression::parse(const std::string& text, const Bindings& bindings) {
  Parser p(text, bindings);
  return Expression(p.parse(), text);
}

Expression Expression::constant(double value) {
  return Expression(make_const(value), std::to_string(value));
}

double Expression::operator()(std::span<const double> vars) const { return eval(*root_, vars); }

Expression Expression::derivative(int slot) const {
  return Expression(diff(root_, slot), "d/dx" + std::to_string(slot) + "(" + text_ + ")");
}

bool Expression::is_constant() const { return !depends_on_any(root_); }

double evaluate_constant(const std::string& text) {
  const Expression e = Expression::parse(text);
  return e(std::span<const double>{});
}

}  // namespace geohydro
