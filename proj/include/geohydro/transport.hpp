// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "geohydro/geodesic.hpp"
#include "geohydro/report.hpp"

namespace geohydro {

/// Positive density of unit total mass (integral of samples dA = 1).
class Density {
 public:
  Density() = default;
  /// Rescales the samples to unit mass. Throws InvalidArgument unless every
  /// sample is positive and finite.
  static Density normalized(const ScalarField& samples);
  static Density uniform(const ChartPtr& chart);

  const ScalarField& field() const { return f_; }
  const ChartPtr& chart() const { return f_.chart(); }
  const std::vector<double>& samples() const { return f_.samples(); }
  double operator[](std::size_t p) const { return f_[p]; }
  double mass() const;

 private:
  ScalarField f_;
};

/// phi(x) = |x|^2 / 2 + u(x) on the flat torus; the map is x + grad u.
struct TransportPotential {
  ScalarField u;

  MapSamples map(double t = 1.0) const;
  /// True when I + D^2 u has det > 0 and trace > 0 at every sample.
  bool convex() const;
};

/// n = eta_* m: n(eta(x)) det D eta(x) = m(x). Evaluated at each node y by
/// inverting eta (Newton) and renormalized; a mass drift above 1e-8 before
/// renormalization is a SolverError. Throws PreconditionError when det D eta <= 0.
Density pushforward(const MapSamples& eta, const Density& m);

/// det(I + D^2 u) - m(x) / n(x + grad u(x)).
ScalarField transport_residual(const TransportPotential& phi, const Density& m, const Density& n);

struct TransportSolution {
  TransportPotential potential;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // sup norms, starting with u = 0
  std::vector<int> halvings;
  std::string message;
};

/// Damped Newton for transport_residual = 0 with a GMRES linear solve
/// preconditioned by the inverse Laplacian. Steps are halved (at most 30
/// times) until the convexity guard holds and the sup residual decreases.
TransportSolution solve_transport(const Density& m, const Density& n, double tol = 1e-10,
                                  int max_iters = 30);

struct Interpolant {
  MapSamples eta;
  Density rho;
};

/// eta_t = x + t grad u and rho_t = (eta_t)_* m.
Interpolant displacement_interpolation(const TransportPotential& phi, const Density& m, double t);

/// Horizontality, Burgers coincidence and projection residuals along the
/// displacement interpolation at t = k / n_times, plus the action-vs-cost check.
ResidualReport submersion_check(const TransportPotential& phi, const Density& m, int n_times,
                                double tol = 1e-6);

/// Central differences in t of the uniform density pushed forward by the
/// Burgers flow x + t X0: L2 norms of d/dt and d^2/dt^2 at t = 0.
ResidualReport vertical_departure_rate(const VectorField& x0, double dt, double tol = 1e-6);

}  // namespace geohydro
