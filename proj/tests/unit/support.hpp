// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "geohydro/calculus.hpp"

namespace geohydro::testing {

inline constexpr double kPi = std::numbers::pi;

// Random trigonometric polynomial with |k_u|, |k_v| <= order, as a closure so
// the exact derivatives stay available.
struct TrigPoly {
  struct Term {
    int ku, kv;
    double a, b;  // a cos(ku u + kv v) + b sin(ku u + kv v)
  };
  std::vector<Term> terms;

  double operator()(double u, double v) const {
    double s = 0;
    for (const auto& t : terms) s += t.a * std::cos(t.ku * u + t.kv * v) + t.b * std::sin(t.ku * u + t.kv * v);
    return s;
  }
  double du(double u, double v) const {
    double s = 0;
    for (const auto& t : terms) {
      const double ph = t.ku * u + t.kv * v;
      s += t.ku * (-t.a * std::sin(ph) + t.b * std::cos(ph));
    }
    return s;
  }
  double dv(double u, double v) const {
    double s = 0;
    for (const auto& t : terms) {
      const double ph = t.ku * u + t.kv * v;
      s += t.kv * (-t.a * std::sin(ph) + t.b * std::cos(ph));
    }
    return s;
  }

  static TrigPoly random(std::mt19937_64& rng, int order) {
    std::normal_distribution<double> n;
    TrigPoly p;
    for (int ku = 0; ku <= order; ++ku) {
      for (int kv = -order; kv <= order; ++kv) {
        if (ku == 0 && kv <= 0) continue;
        p.terms.push_back({ku, kv, n(rng), n(rng)});
      }
    }
    return p;
  }
};

inline ScalarField sample(const ChartPtr& c, const std::function<double(double, double)>& f) {
  return ScalarField::sample(c, f);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace geohydro::testing
