// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "geohydro/error.hpp"
#include "geohydro/poisson.hpp"

namespace geohydro {

namespace {

const SurfaceChart& chart_of(const ScalarField& f) {
  if (!f.chart()) throw InvalidArgument("field has no chart");
  return *f.chart();
}

const SurfaceChart& chart_of(const VectorField& x) {
  if (!x.chart()) throw InvalidArgument("field has no chart");
  return *x.chart();
}

}  // namespace

ScalarField partial_u(const ScalarField& f) {
  return ScalarField(f.chart(), chart_of(f).ops().du(f.samples()));
}

ScalarField partial_v(const ScalarField& f) {
  return ScalarField(f.chart(), chart_of(f).ops().dv(f.samples()));
}

VectorField grad(const ScalarField& f) {
  const auto& c = chart_of(f);
  const auto fu = c.ops().du(f.samples());
  const auto fv = c.ops().dv(f.samples());
  VectorField out(f.chart());
  for (std::size_t p = 0; p < c.size(); ++p) {
    out.x1()[p] = c.ginv11()[p] * fu[p] + c.ginv12()[p] * fv[p];
    out.x2()[p] = c.ginv12()[p] * fu[p] + c.ginv22()[p] * fv[p];
  }
  return out;
}

ScalarField div(const VectorField& x) {
  const auto& c = chart_of(x);
  const auto& s = c.sqrt_det_g();
  std::vector<double> a(c.size()), b(c.size());
  for (std::size_t p = 0; p < c.size(); ++p) {
    a[p] = s[p] * x.x1()[p];
    b[p] = s[p] * x.x2()[p];
  }
  const auto da = c.ops().du(a);
  const auto db = c.ops().dv(b);
  ScalarField out(x.chart());
  for (std::size_t p = 0; p < c.size(); ++p) out[p] = (da[p] + db[p]) / s[p];
  return out;
}

ScalarField laplacian(const ScalarField& f) { return div(grad(f)); }

VectorField symplectic_gradient(const ScalarField& psi) {
  const auto& c = chart_of(psi);
  const auto pu = c.ops().du(psi.samples());
  const auto pv = c.ops().dv(psi.samples());
  VectorField out(psi.chart());
  for (std::size_t p = 0; p < c.size(); ++p) {
    out.x1()[p] = -pv[p] / c.sqrt_det_g()[p];
    out.x2()[p] = pu[p] / c.sqrt_det_g()[p];
  }
  return out;
}

VectorField covariant_advection(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart());
  const auto& c = chart_of(x);
  const auto y1u = c.ops().du(y.x1()), y1v = c.ops().dv(y.x1());
  const auto y2u = c.ops().du(y.x2()), y2v = c.ops().dv(y.x2());
  VectorField out(x.chart());
  for (std::size_t p = 0; p < c.size(); ++p) {
    const double a = x.x1()[p], b = x.x2()[p];
    const double ya = y.x1()[p], yb = y.x2()[p];
    double r1 = a * y1u[p] + b * y1v[p];
    double r2 = a * y2u[p] + b * y2v[p];
    r1 += c.christoffel(0, 0, 0)[p] * a * ya + c.christoffel(0, 0, 1)[p] * (a * yb + b * ya) +
          c.christoffel(0, 1, 1)[p] * b * yb;
    r2 += c.christoffel(1, 0, 0)[p] * a * ya + c.christoffel(1, 0, 1)[p] * (a * yb + b * ya) +
          c.christoffel(1, 1, 1)[p] * b * yb;
    out.x1()[p] = r1;
    out.x2()[p] = r2;
  }
  return out;
}

MixedTensor covariant_differential(const VectorField& x) {
  const auto& c = chart_of(x);
  MixedTensor a{ScalarField(x.chart(), c.ops().du(x.x1())),
                ScalarField(x.chart(), c.ops().dv(x.x1())),
                ScalarField(x.chart(), c.ops().du(x.x2())),
                ScalarField(x.chart(), c.ops().dv(x.x2()))};
  for (std::size_t p = 0; p < c.size(); ++p) {
    const double x1 = x.x1()[p], x2 = x.x2()[p];
    // A^i_j += Gamma^i_{jk} X^k
    a.a11[p] += c.christoffel(0, 0, 0)[p] * x1 + c.christoffel(0, 0, 1)[p] * x2;
    a.a12[p] += c.christoffel(0, 1, 0)[p] * x1 + c.christoffel(0, 1, 1)[p] * x2;
    a.a21[p] += c.christoffel(1, 0, 0)[p] * x1 + c.christoffel(1, 0, 1)[p] * x2;
    a.a22[p] += c.christoffel(1, 1, 0)[p] * x1 + c.christoffel(1, 1, 1)[p] * x2;
  }
  return a;
}

SymmetricTensor hessian(const ScalarField& psi, HessianConvention convention) {
  const auto& c = chart_of(psi);
  SymmetricTensor h{ScalarField(psi.chart(), c.ops().duu(psi.samples())),
                    ScalarField(psi.chart(), c.ops().duv(psi.samples())),
                    ScalarField(psi.chart(), c.ops().dvv(psi.samples()))};
  if (convention == HessianConvention::Coordinate) return h;
  const auto pu = c.ops().du(psi.samples());
  const auto pv = c.ops().dv(psi.samples());
  for (std::size_t p = 0; p < c.size(); ++p) {
    h.h11[p] -= c.christoffel(0, 0, 0)[p] * pu[p] + c.christoffel(1, 0, 0)[p] * pv[p];
    h.h12[p] -= c.christoffel(0, 0, 1)[p] * pu[p] + c.christoffel(1, 0, 1)[p] * pv[p];
    h.h22[p] -= c.christoffel(0, 1, 1)[p] * pu[p] + c.christoffel(1, 1, 1)[p] * pv[p];
  }
  return h;
}

ScalarField covariant_hessian_det(const ScalarField& psi, HessianConvention convention) {
  const SymmetricTensor h = hessian(psi, convention);
  ScalarField out(psi.chart());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = h.h11[p] * h.h22[p] - h.h12[p] * h.h12[p];
  return out;
}

ScalarField determinant(const MixedTensor& a) {
  ScalarField out(a.a11.chart());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = a.a11[p] * a.a22[p] - a.a12[p] * a.a21[p];
  return out;
}

ScalarField trace_square(const MixedTensor& a) {
  ScalarField out(a.a11.chart());
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = a.a11[p] * a.a11[p] + 2.0 * a.a12[p] * a.a21[p] + a.a22[p] * a.a22[p];
  }
  return out;
}

ScalarField directional_derivative(const VectorField& x, const ScalarField& f) {
  require_same_chart(x.chart(), f.chart());
  const auto& c = chart_of(f);
  const auto fu = c.ops().du(f.samples());
  const auto fv = c.ops().dv(f.samples());
  ScalarField out(f.chart());
  for (std::size_t p = 0; p < c.size(); ++p) out[p] = x.x1()[p] * fu[p] + x.x2()[p] * fv[p];
  return out;
}

ScalarField metric_inner(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart());
  const auto& c = chart_of(x);
  ScalarField out(x.chart());
  for (std::size_t p = 0; p < c.size(); ++p) {
    out[p] = c.g11()[p] * x.x1()[p] * y.x1()[p] +
             c.g12()[p] * (x.x1()[p] * y.x2()[p] + x.x2()[p] * y.x1()[p]) +
             c.g22()[p] * x.x2()[p] * y.x2()[p];
  }
  return out;
}

ScalarField vorticity(const VectorField& x) {
  const auto& c = chart_of(x);
  std::vector<double> lower1(c.size()), lower2(c.size());
  for (std::size_t p = 0; p < c.size(); ++p) {
    lower1[p] = c.g11()[p] * x.x1()[p] + c.g12()[p] * x.x2()[p];
    lower2[p] = c.g12()[p] * x.x1()[p] + c.g22()[p] * x.x2()[p];
  }
  const auto d2u = c.ops().du(lower2);
  const auto d1v = c.ops().dv(lower1);
  ScalarField out(x.chart());
  for (std::size_t p = 0; p < c.size(); ++p) out[p] = (d2u[p] - d1v[p]) / c.sqrt_det_g()[p];
  return out;
}

double integrate(const ScalarField& f) {
  const auto& w = chart_of(f).area_weights();
  double s = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) s += f[p] * w[p];
  return s;
}

double l2_inner(const VectorField& x, const VectorField& y) {
  return integrate(metric_inner(x, y));
}

double l2_norm(const ScalarField& f) { return std::sqrt(integrate(f * f)); }

double l2_norm(const VectorField& x) { return std::sqrt(std::max(0.0, l2_inner(x, x))); }

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double s : f.samples()) m = std::max(m, std::abs(s));
  return m;
}

double sup_norm(const VectorField& x) {
  const ScalarField len2 = metric_inner(x, x);
  double m = 0.0;
  for (double s : len2.samples()) m = std::max(m, s);
  return std::sqrt(m);
}

ScalarField inverse_laplacian(const ScalarField& f) {
  return ScalarField(f.chart(), chart_of(f).poisson().solve(f.samples()));
}

HelmholtzParts helmholtz_decompose(const VectorField& x) {
  const auto& c = chart_of(x);
  const ScalarField d = div(x);
  std::vector<double> p;
  if (c.grid().u_periodic) {
    p = c.poisson().solve(d.samples());
  } else {
    const auto& g = c.grid();
    std::vector<double> lo(g.nv), hi(g.nv);
    for (int j = 0; j < g.nv; ++j) {
      lo[j] = x.x1()[g.index(0, j)];
      hi[j] = x.x1()[g.index(g.nu - 1, j)];
    }
    p = c.poisson().solve_neumann(d.samples(), lo, hi);
  }
  ScalarField potential(x.chart(), std::move(p));
  VectorField gradient_part = grad(potential);
  VectorField divergence_free = x - gradient_part;
  return HelmholtzParts{std::move(divergence_free), std::move(gradient_part),
                        std::move(potential)};
}

ScalarField divergence_identity_residual(const VectorField& x) {
  const auto& c = chart_of(x);
  const ScalarField lhs = div(covariant_advection(x, x));
  const ScalarField f = metric_inner(x, x);
  const ScalarField tr2 = trace_square(covariant_differential(x));
  const ScalarField lie = directional_derivative(x, div(x));
  ScalarField out(x.chart());
  for (std::size_t p = 0; p < c.size(); ++p) {
    out[p] = lhs[p] - (c.curvature()[p] * f[p] + tr2[p] + lie[p]);
  }
  return out;
}

}  // namespace geohydro
