// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "geohydro/calculus.hpp"
#include "geohydro/report.hpp"

namespace geohydro {

/// Default pass thresholds: spectral flat charts vs finite-difference curved ones.
struct Tolerances {
  double flat = 1e-8;
  double curved = 1e-4;
  double for_chart(const SurfaceChart& chart) const { return chart.is_flat() ? flat : curved; }
};

/// sup and L2 norms of div X and div(nabla_X X). X is asymptotic when all pass.
ResidualReport asymptotic_residuals(const VectorField& x, const Tolerances& tol = {});

/// det[D^2 psi] - (g K / 2) |grad psi|^2, pointwise, g = det(g_ij).
ScalarField ma_residual(const ScalarField& psi,
                        HessianConvention convention = HessianConvention::Covariant);

/// Compares div(nabla_X X) for X = J grad psi with the Monge-Ampere residual.
/// For the covariant Hessian the two satisfy div(nabla_X X) = -(2/g) ma_residual
/// pointwise; the report carries both norms and the sup of that difference.
ResidualReport equivalence_check(const ScalarField& psi, const Tolerances& tol = {},
                                 HessianConvention convention = HessianConvention::Covariant);

/// sup over boundary samples of |g(X, n)| and |g(nabla_X X, n)|.
/// Throws PreconditionError on boundaryless charts.
ResidualReport boundary_residuals(const VectorField& x, const Tolerances& tol = {});

/// sup over the boundary of |g(nabla_X X, n_in) - kg g(X, X)| for X tangent to
/// the boundary (n_in the inward normal, kg in the Gauss-Bonnet convention).
/// Throws PreconditionError when X is not tangent.
ResidualReport kg_identity_residual(const VectorField& x, const Tolerances& tol = {});

/// At the maximum x0 of f = g(X, X): |det DX|, |tr (DX)^2| and
/// |div(nabla_X X) - K f|. Values are reported at the grid argmax (metrics) and
/// at a Newton refinement of the maximum of the interpolated f (entries).
/// Throws PreconditionError if X is not divergence-free or vanishes.
ResidualReport maxpoint_diagnostic(const VectorField& x, const Tolerances& tol = {});

/// J(psi) = ||ma_residual||^2 / ||grad psi||^4 in L2; scale-free in psi.
/// Throws PreconditionError when grad psi vanishes.
double normalized_residual(const ScalarField& psi,
                           HessianConvention convention = HessianConvention::Covariant);

struct SearchOptions {
  int band_limit = 8;
  int restarts = 20;
  std::uint64_t seed = 1;
  int max_iterations = 200;
  /// Fraction of the band width excluded at each edge by the cutoff.
  double margin = 0.1;
  HessianConvention convention = HessianConvention::Covariant;
};

struct RestartRecord {
  double initial_residual = 0.0;
  double final_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

struct SearchResult {
  ScalarField best_psi;
  double normalized_residual = 0.0;
  int restarts = 0;
  int parameters = 0;
  std::vector<RestartRecord> runs;
};

/// Multi-start minimization of normalized_residual over a band-limited family
/// of stream functions. On bounded charts the family is cut off smoothly
/// inside the band (margin at each edge); on closed charts it is a Fourier
/// family without the constant mode. Throws SolverError if every restart fails.
SearchResult nonexistence_search(const ChartPtr& chart, const SearchOptions& options);

}  // namespace geohydro
