// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "geohydro/asymptotic.hpp"
#include "geohydro/calculus.hpp"

namespace geohydro {

/// Images eta(x) of the grid nodes, in chart coordinates. Periodic
/// coordinates are unwrapped (no reduction modulo the period), so
/// eta - x is a smooth periodic displacement.
struct MapSamples {
  ChartPtr chart;
  std::vector<double> u, v;

  static MapSamples identity(const ChartPtr& chart);
  std::size_t size() const { return u.size(); }
};

/// det D(eta) at every node, from the chart's derivative operators applied
/// to the displacement.
ScalarField jacobian_determinant(const MapSamples& eta);

/// Flat L2 distance (integral of |eta(x) - xi(x)|^2_g(x) dA(x))^(1/2).
double map_distance(const MapSamples& a, const MapSamples& b);

/// Inverse map on a fully periodic chart: for every node y the point x with
/// eta(x) = y, by Newton on the interpolated map. Throws SolverError when
/// Newton fails (e.g. a folded map).
MapSamples invert_map(const MapSamples& eta);

/// f(eta(x)) for grid samples of f, by interpolation.
std::vector<double> compose(const ScalarField& f, const MapSamples& eta);

struct FlowOptions {
  /// Times at which the path is recorded (besides 0). Empty: every step.
  std::vector<double> save_times;
  /// Also record spatial (Eulerian) velocities for Burgers paths by inverting
  /// the map. Fully periodic charts only.
  bool spatial_velocity = false;
};

struct DiffeoPath {
  ChartPtr chart;
  std::vector<double> times;
  std::vector<MapSamples> maps;
  /// Spatial velocity V_t (so that d eta/dt = V_t o eta); may be empty for
  /// Burgers paths unless requested.
  std::vector<VectorField> velocities;
  /// Material velocity d eta/dt at every node, per recorded time.
  std::vector<MapSamples> material_velocities;
  /// Euler paths only: kinetic energy (1/2)<V,V> and enstrophy (1/2)||omega||^2.
  std::vector<double> energy, enstrophy;
  int steps_taken = 0;
};

/// Dispersionless Burgers flow d_t X + nabla_X X = 0: every particle follows a
/// geodesic of the chart with initial velocity X0. Straight lines (closed form)
/// on the flat torus; RK4 on the geodesic ODE otherwise. `steps` = 0 picks the
/// step from a CFL factor 0.5. Throws CausticError when det D(eta) reaches 0
/// before t_final.
DiffeoPath burgers_flow(const VectorField& x0, double t_final, int steps,
                        const FlowOptions& options = {});

/// First time det(I + t DX0) vanishes on the flat torus (infinity if never).
double burgers_caustic_time(const VectorField& x0);

/// Incompressible Euler on the flat torus: pseudo-spectral vorticity /
/// stream-function form, RK4, 2/3-rule dealiasing of the advection term, with
/// particles co-integrated through the interpolated velocity. `steps` = 0 picks
/// the step from CFL 0.5; a CFL number above 0.85 is rejected.
DiffeoPath euler_flow(const VectorField& x0, double t_final, int steps,
                      const FlowOptions& options = {});

/// Zero-mean p with laplacian(p) = -div(nabla_X X) on a closed chart.
ScalarField pressure_field(const VectorField& x, const Tolerances& tol = {});

/// s(X, Y) = gradient part of nabla_X Y, for divergence-free X, Y.
VectorField second_fundamental_form(const VectorField& x, const VectorField& y,
                                    const Tolerances& tol = {});

struct TangencyOptions {
  double t_max = 0.1;
  int n_samples = 12;
  /// Decades covered below t_max by the log-spaced sample times.
  double decades = 2.0;
  /// Distances at or below this are treated as round-off.
  double roundoff = 1e-9;
  /// Euler steps per unit time (0: CFL 0.5).
  int steps_per_unit_time = 0;
};

struct TangencyFit {
  std::vector<double> t_samples;
  std::vector<double> distances;
  /// "fit" or "exact coincidence".
  std::string outcome;
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  int fit_points = 0;
  /// Second derivative of d(t) at 0 from d(t)/t^2 = c0 + c1 t (d''(0) = 2 c0),
  /// and ||grad p||_L2 for comparison.
  double d2_at_zero = 0.0;
  double pressure_gradient_norm = 0.0;
};

/// d(t) = map_distance(euler_flow(X0), burgers_flow(X0)) at log-spaced t and
/// its log-log slope over the smallest decade above round-off.
TangencyFit tangency_order(const VectorField& x0, const TangencyOptions& options = {});

}  // namespace geohydro
