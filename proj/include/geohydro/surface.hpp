// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "geohydro/differentiation.hpp"
#include "geohydro/grid.hpp"
#include "geohydro/interpolation.hpp"

namespace geohydro {

class PoissonSolver;

enum class ChartKind { FlatTorus, SphereBand, Revolution };
enum class Edge { UMin, UMax };

std::string to_string(ChartKind kind);

/// One boundary circle u = const of a bounded chart.
///
/// `kg` follows the Gauss-Bonnet convention (curvature measured against the
/// inward normal), so a convex boundary has kg > 0. `normal_u/normal_v` are
/// the contravariant components of the outward unit normal.
struct BoundaryCurve {
  Edge which_edge = Edge::UMin;
  int row = 0;
  std::vector<double> kg;
  std::vector<double> normal_u;
  std::vector<double> normal_v;
};

/// Arc-length profile rho(t) of a surface of revolution dt^2 + rho(t)^2 dphi^2.
/// Derivative callbacks are optional; missing ones are computed on the grid.
struct Profile {
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> d2rho;

  /// Parses an expression in t and differentiates it symbolically.
  static Profile from_expression(const std::string& text);
};

/// Raw sampled geometry handed to the SurfaceChart constructor.
struct ChartData {
  ParameterGrid grid;
  ChartKind kind = ChartKind::FlatTorus;
  std::vector<double> g11, g12, g22;
  // Gamma^i_{jk} stored as [i][sym(j,k)] with sym = 0 (11), 1 (12), 2 (22).
  std::array<std::vector<double>, 6> christoffel;
  std::vector<double> curvature;
  std::vector<BoundaryCurve> boundary;
};

/// A discretized 2D Riemannian surface. Immutable after construction.
class SurfaceChart {
 public:
  /// Validates shapes and positive-definiteness; throws InvalidArgument.
  explicit SurfaceChart(ChartData data);
  ~SurfaceChart();

  const ParameterGrid& grid() const { return data_.grid; }
  ChartKind kind() const { return data_.kind; }
  std::size_t size() const { return data_.grid.size(); }

  const std::vector<double>& g11() const { return data_.g11; }
  const std::vector<double>& g12() const { return data_.g12; }
  const std::vector<double>& g22() const { return data_.g22; }
  const std::vector<double>& ginv11() const { return ginv11_; }
  const std::vector<double>& ginv12() const { return ginv12_; }
  const std::vector<double>& ginv22() const { return ginv22_; }
  /// det(g_ij), the factor g in g*K/2.
  const std::vector<double>& det_g() const { return det_g_; }
  const std::vector<double>& sqrt_det_g() const { return sqrt_det_g_; }
  const std::vector<double>& curvature() const { return data_.curvature; }

  /// Gamma^i_{jk}, indices in {0, 1}.
  const std::vector<double>& christoffel(int i, int j, int k) const;

  const std::vector<BoundaryCurve>& boundary() const { return data_.boundary; }
  bool has_boundary() const { return !data_.boundary.empty(); }
  /// True when the metric is the identity (flat torus).
  bool is_flat() const { return data_.kind == ChartKind::FlatTorus; }

  const DerivativeOps& ops() const { return ops_; }
  const GridInterpolator& interpolator() const { return interp_; }

  /// Coordinate quadrature weights (du dv), without the area factor.
  const std::vector<double>& weights() const { return weights_; }
  /// Riemannian area weights sqrt(det g) du dv.
  const std::vector<double>& area_weights() const { return area_weights_; }
  double area() const;

  /// Lazily built Laplace-Beltrami inverse (thread-safe).
  const PoissonSolver& poisson() const;

 private:
  ChartData data_;
  std::vector<double> ginv11_, ginv12_, ginv22_, det_g_, sqrt_det_g_;
  std::vector<double> weights_, area_weights_;
  DerivativeOps ops_;
  GridInterpolator interp_;
  mutable std::once_flag poisson_once_;
  mutable std::unique_ptr<PoissonSolver> poisson_;
};

using ChartPtr = std::shared_ptr<const SurfaceChart>;

/// Doubly periodic [0, lx) x [0, ly) with the identity metric.
ChartPtr build_flat_torus(double lx, double ly, int nu, int nv);

/// Surface of revolution over t in t_range (u = t, v = azimuth in [0, 2pi)).
/// When t_periodic the t range is one period (e.g. a torus of revolution) and
/// the chart has no boundary; otherwise both ends are boundary circles.
ChartPtr build_revolution(const Profile& profile, Interval t_range, int nu, int nv,
                          bool t_periodic = false);

/// Same, from profile samples at the nu grid nodes; derivatives are numerical.
ChartPtr build_revolution_from_samples(std::span<const double> rho, Interval t_range, int nv,
                                       bool t_periodic = false);

/// Band theta_min <= theta <= theta_max of the unit sphere (rho = sin t).
ChartPtr build_sphere_band(double theta_min, double theta_max, int nu, int nv);

/// Integral of K dA plus the boundary integral of kg ds (Gauss-Bonnet sum).
double gauss_bonnet_sum(const SurfaceChart& chart);

}  // namespace geohydro
