// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "geohydro/grid.hpp"

namespace geohydro {

/// Tensor-product Lagrange interpolation of grid samples at arbitrary points.
///
/// Uses an 8-point stencil per direction (degree 7): periodic axes wrap,
/// bounded axes shift the stencil inward near the ends.
class GridInterpolator {
 public:
  static constexpr int kWidth = 8;

  explicit GridInterpolator(const ParameterGrid& grid) : grid_(grid) {}

  struct Stencil {
    std::array<int, kWidth> index{};
    std::array<double, kWidth> weight{};
  };

  /// Throws InvalidArgument when a bounded coordinate lies outside its range.
  Stencil stencil_u(double u) const;
  Stencil stencil_v(double v) const;

  double operator()(std::span<const double> samples, double u, double v) const;

  /// Evaluates several sample arrays at one point, sharing the stencil work.
  template <std::size_t N>
  std::array<double, N> many(const std::array<std::span<const double>, N>& fields, double u,
                             double v) const {
    const Stencil su = stencil_u(u);
    const Stencil sv = stencil_v(v);
    std::array<double, N> out{};
    for (int a = 0; a < kWidth; ++a) {
      const std::size_t row = static_cast<std::size_t>(su.index[a]) * grid_.nv;
      for (std::size_t f = 0; f < N; ++f) {
        double acc = 0.0;
        for (int b = 0; b < kWidth; ++b) acc += sv.weight[b] * fields[f][row + sv.index[b]];
        out[f] += su.weight[a] * acc;
      }
    }
    return out;
  }

  const ParameterGrid& grid() const { return grid_; }

 private:
  Stencil stencil(double x, double lo, double h, int n, bool periodic) const;
  ParameterGrid grid_;
};

}  // namespace geohydro
