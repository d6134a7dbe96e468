// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/field.hpp"

#include "geohydro/error.hpp"

namespace geohydro {

void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (!a || !b) throw InvalidArgument("field has no chart");
  if (a != b) throw InvalidArgument("fields live on different charts");
}

ScalarField::ScalarField(ChartPtr chart, double value)
    : chart_(std::move(chart)), samples_(chart_ ? chart_->size() : 0, value) {
  if (!chart_) throw InvalidArgument("field has no chart");
}

ScalarField::ScalarField(ChartPtr chart, std::vector<double> samples)
    : chart_(std::move(chart)), samples_(std::move(samples)) {
  if (!chart_) throw InvalidArgument("field has no chart");
  if (samples_.size() != chart_->size()) {
    throw InvalidArgument("sample array shape does not match the chart grid");
  }
}

ScalarField ScalarField::sample(ChartPtr chart, const std::function<double(double, double)>& f) {
  ScalarField out(chart);
  const auto& g = chart->grid();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) out.samples_[g.index(i, j)] = f(g.u(i), g.v(j));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_chart(chart_, o.chart_);
  for (std::size_t p = 0; p < samples_.size(); ++p) samples_[p] += o.samples_[p];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_chart(chart_, o.chart_);
  for (std::size_t p = 0; p < samples_.size(); ++p) samples_[p] -= o.samples_[p];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& s : samples_) s *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_chart(a.chart(), b.chart());
  ScalarField out = a;
  for (std::size_t p = 0; p < out.size(); ++p) out[p] *= b[p];
  return out;
}

VectorField::VectorField(ChartPtr chart)
    : chart_(std::move(chart)),
      x1_(chart_ ? chart_->size() : 0, 0.0),
      x2_(chart_ ? chart_->size() : 0, 0.0) {
  if (!chart_) throw InvalidArgument("field has no chart");
}

VectorField::VectorField(ChartPtr chart, std::vector<double> x1, std::vector<double> x2)
    : chart_(std::move(chart)), x1_(std::move(x1)), x2_(std::move(x2)) {
  if (!chart_) throw InvalidArgument("field has no chart");
  if (x1_.size() != chart_->size() || x2_.size() != chart_->size()) {
    throw InvalidArgument("component arrays do not match the chart grid");
  }
}

VectorField VectorField::sample(ChartPtr chart, const std::function<double(double, double)>& f1,
                                const std::function<double(double, double)>& f2) {
  VectorField out(chart);
  const auto& g = chart->grid();
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(i, j);
      out.x1_[p] = f1(g.u(i), g.v(j));
      out.x2_[p] = f2(g.u(i), g.v(j));
    }
  }
  return out;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_chart(chart_, o.chart_);
  for (std::size_t p = 0; p < x1_.size(); ++p) {
    x1_[p] += o.x1_[p];
    x2_[p] += o.x2_[p];
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_chart(chart_, o.chart_);
  for (std::size_t p = 0; p < x1_.size(); ++p) {
    x1_[p] -= o.x1_[p];
    x2_[p] -= o.x2_[p];
  }
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (std::size_t p = 0; p < x1_.size(); ++p) {
    x1_[p] *= c;
    x2_[p] *= c;
  }
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

}  // namespace geohydro
