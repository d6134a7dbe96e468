// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "geohydro/surface.hpp"

namespace geohydro {

/// Grid samples of a function on a chart.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(ChartPtr chart, double value = 0.0);
  ScalarField(ChartPtr chart, std::vector<double> samples);

  /// Samples f(u, v) at every grid node.
  static ScalarField sample(ChartPtr chart, const std::function<double(double, double)>& f);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t p) const { return samples_[p]; }
  double& operator[](std::size_t p) { return samples_[p]; }
  double at(int i, int j) const { return samples_[chart_->grid().index(i, j)]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

 private:
  ChartPtr chart_;
  std::vector<double> samples_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// Contravariant vector field X = x1 d/du + x2 d/dv.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(ChartPtr chart);
  VectorField(ChartPtr chart, std::vector<double> x1, std::vector<double> x2);

  static VectorField sample(ChartPtr chart, const std::function<double(double, double)>& f1,
                            const std::function<double(double, double)>& f2);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<double>& x1() const { return x1_; }
  const std::vector<double>& x2() const { return x2_; }
  std::vector<double>& x1() { return x1_; }
  std::vector<double>& x2() { return x2_; }
  std::size_t size() const { return x1_.size(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double c);

 private:
  ChartPtr chart_;
  std::vector<double> x1_, x2_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

/// Throws InvalidArgument unless both objects live on the same chart.
void require_same_chart(const ChartPtr& a, const ChartPtr& b);

}  // namespace geohydro
