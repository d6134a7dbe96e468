// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geohydro {

/// Arithmetic expression over named variables, with symbolic differentiation.
///
/// Grammar: numbers, variables, `pi`, `e`, the operators + - * / ^ and the
/// functions sin cos tan asin acos atan sinh cosh tanh exp log sqrt abs.
/// Used for profile curves, field specifications and numeric config values.
class Expression {
 public:
  /// Each binding maps a variable name to a slot in the evaluation vector.
  /// Several names may share a slot (aliases such as t -> u).
  using Bindings = std::vector<std::pair<std::string, int>>;

  Expression();  // the constant 0

  /// Throws InvalidArgument on syntax errors and unknown identifiers.
  static Expression parse(const std::string& text, const Bindings& bindings = {});
  static Expression constant(double value);

  double operator()(std::span<const double> vars) const;
  double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }
  double operator()(double x, double y) const {
    const double v[2] = {x, y};
    return (*this)(std::span<const double>(v, 2));
  }

  /// Symbolic derivative with respect to the variable in `slot`.
  Expression derivative(int slot) const;

  bool is_constant() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> root, std::string text);
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Evaluates a constant expression such as "pi/6" or "2.5e-3".
double evaluate_constant(const std::string& text);

}  // namespace geohydro
