// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "geohydro/error.hpp"

namespace geohydro {

GridInterpolator::Stencil GridInterpolator::stencil(double x, double lo, double h, int n,
                                                    bool periodic) const {
  Stencil s;
  const double pos = (x - lo) / h;
  if (periodic) {
    const int base = static_cast<int>(std::floor(pos)) - (kWidth / 2 - 1);
    const double local = pos - base;
    for (int k = 0; k < kWidth; ++k) {
      int idx = (base + k) % n;
      if (idx < 0) idx += n;
      s.index[k] = idx;
    }
    for (int k = 0; k < kWidth; ++k) {
      double w = 1.0;
      for (int m = 0; m < kWidth; ++m) {
        if (m != k) w *= (local - m) / static_cast<double>(k - m);
      }
      s.weight[k] = w;
    }
    return s;
  }
  constexpr double kSlack = 1e-9;
  if (pos < -kSlack || pos > (n - 1) + kSlack) {
    throw InvalidArgument("interpolation point outside bounded coordinate range");
  }
  int base = static_cast<int>(std::floor(pos)) - (kWidth / 2 - 1);
  base = std::clamp(base, 0, n - kWidth);
  const double local = pos - base;
  for (int k = 0; k < kWidth; ++k) {
    s.index[k] = base + k;
    double w = 1.0;
    for (int m = 0; m < kWidth; ++m) {
      if (m != k) w *= (local - m) / static_cast<double>(k - m);
    }
    s.weight[k] = w;
  }
  return s;
}

GridInterpolator::Stencil GridInterpolator::stencil_u(double u) const {
  return stencil(u, grid_.u_range.lo, grid_.du(), grid_.nu, grid_.u_periodic);
}

GridInterpolator::Stencil GridInterpolator::stencil_v(double v) const {
  return stencil(v, grid_.v_range.lo, grid_.dv(), grid_.nv, grid_.v_periodic);
}

double GridInterpolator::operator()(std::span<const double> samples, double u, double v) const {
  return many<1>({samples}, u, v)[0];
}

}  // namespace geohydro
