// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geohydro/field.hpp"

namespace geohydro {

/// Inverse of the discrete Laplace-Beltrami operator div(grad .) on charts
/// whose metric is du^2 + rho(u)^2 dv^2 (all chart kinds built here).
///
/// The v direction is diagonalized by FFT; each azimuthal mode is a dense
/// solve in u built from the same derivative matrices as grad and div, so
/// div(grad p) reproduces the source to round-off. The additive constant is
/// fixed by zero area-weighted mean.
class PoissonSolver {
 public:
  explicit PoissonSolver(const SurfaceChart& chart);
  ~PoissonSolver();

  /// Closed charts. Throws InconsistentInput when the source has nonzero mean.
  std::vector<double> solve(std::span<const double> source) const;

  /// Bounded charts: Laplacian = source in the interior rows and the Neumann
  /// data d_u p prescribed on the u = u_min and u = u_max rows.
  std::vector<double> solve_neumann(std::span<const double> source,
                                    std::span<const double> du_at_min,
                                    std::span<const double> du_at_max) const;

 private:
  struct ModeSolver;
  std::vector<double> solve_modes(std::vector<std::complex<double>> spec) const;
  void remove_mean(std::vector<double>& p) const;

  const SurfaceChart& chart_;
  std::vector<std::unique_ptr<ModeSolver>> modes_;
  std::unique_ptr<LineFft> edge_fft_;
};

}  // namespace geohydro
