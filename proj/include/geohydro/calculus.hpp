// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geohydro/field.hpp"

namespace geohydro {

/// Which matrix det[D^2 psi] refers to in the Monge-Ampere residual.
/// Covariant: d_i d_j psi - Gamma^k_ij d_k psi. Coordinate: d_i d_j psi.
/// Both coincide on the flat torus.
enum class HessianConvention { Covariant, Coordinate };

/// Mixed tensor A^i_j stored row i, column j (for DX: A^i_j = nabla_j X^i).
struct MixedTensor {
  ScalarField a11, a12, a21, a22;
};

/// Symmetric covariant 2-tensor h_ij.
struct SymmetricTensor {
  ScalarField h11, h12, h22;
};

ScalarField partial_u(const ScalarField& f);
ScalarField partial_v(const ScalarField& f);

/// Contravariant gradient g^{ij} d_j f.
VectorField grad(const ScalarField& f);

/// (1/sqrt g) d_i (sqrt g X^i).
ScalarField div(const VectorField& x);

/// div(grad f).
ScalarField laplacian(const ScalarField& f);

/// Hamiltonian field of psi for the area form sqrt(g) du^dv:
/// X = (-d_v psi, d_u psi) / sqrt(g).
VectorField symplectic_gradient(const ScalarField& psi);

/// (nabla_X Y)^i = X^j d_j Y^i + Gamma^i_jk X^j Y^k.
VectorField covariant_advection(const VectorField& x, const VectorField& y);

/// Covariant differential A^i_j = d_j X^i + Gamma^i_jk X^k.
MixedTensor covariant_differential(const VectorField& x);

SymmetricTensor hessian(const ScalarField& psi,
                        HessianConvention convention = HessianConvention::Covariant);

/// det(h_ij) of the Hessian with lower indices.
ScalarField covariant_hessian_det(const ScalarField& psi,
                                  HessianConvention convention = HessianConvention::Covariant);

ScalarField determinant(const MixedTensor& a);
/// tr(A^2) = A^i_j A^j_i.
ScalarField trace_square(const MixedTensor& a);

/// L_X f = X^i d_i f.
ScalarField directional_derivative(const VectorField& x, const ScalarField& f);

/// Pointwise g(X, Y).
ScalarField metric_inner(const VectorField& x, const VectorField& y);

/// Scalar vorticity (1/sqrt g)(d_u X_v - d_v X_u) built from covariant components.
ScalarField vorticity(const VectorField& x);

/// Integral of f dV.
double integrate(const ScalarField& f);
/// Integral of g(X, Y) dV, the flat L2 pairing.
double l2_inner(const VectorField& x, const VectorField& y);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& x);
double sup_norm(const ScalarField& f);
/// Maximum of the metric length |X|_g.
double sup_norm(const VectorField& x);

/// Zero-mean solution of laplacian(p) = f on a closed chart.
ScalarField inverse_laplacian(const ScalarField& f);

struct HelmholtzParts {
  VectorField divergence_free;
  VectorField gradient_part;
  ScalarField potential;  // gradient_part = grad(potential), zero mean
};

/// X = P(X) + grad(Lap^-1 div X). On bounded charts the potential carries the
/// Neumann data d_n p = g(X, n), so P(X) is tangent to the boundary.
HelmholtzParts helmholtz_decompose(const VectorField& x);

/// div nabla_X X - [K g(X,X) + tr(DX)^2 + L_X(div X)], pointwise.
ScalarField divergence_identity_residual(const VectorField& x);

}  // namespace geohydro
