// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>

#include "geohydro/error.hpp"
#include "geohydro/surface.hpp"
#include "support.hpp"

using namespace geohydro;
using geohydro::testing::kPi;
using geohydro::testing::TrigPoly;

namespace {

// Parallel-transport oracle for nabla_X X on the revolution metric
// dt^2 + rho^2 dphi^2, with hand-derived Christoffel symbols.
struct RevolutionOracle {
  std::function<double(double)> rho, drho;
  std::function<std::array<double, 2>(double, double)> x;

  // State: position (t, phi) and transported vector (w^t, w^phi).
  using State = std::array<double, 4>;

  State rhs(const State& s) const {
    const auto v = x(s[0], s[1]);
    const double r = rho(s[0]), dr = drho(s[0]);
    // dW^i/ds = -Gamma^i_jk v^j W^k
    const double dwt = r * dr * v[1] * s[3];
    const double dwp = -(dr / r) * (v[0] * s[3] + v[1] * s[2]);
    return {v[0], v[1], dwt, dwp};
  }

  State flow(State s, double len, int steps) const {
    const double h = len / steps;
    for (int k = 0; k < steps; ++k) {
      const State k1 = rhs(s);
      State y;
      for (int i = 0; i < 4; ++i) y[i] = s[i] + 0.5 * h * k1[i];
      const State k2 = rhs(y);
      for (int i = 0; i < 4; ++i) y[i] = s[i] + 0.5 * h * k2[i];
      const State k3 = rhs(y);
      for (int i = 0; i < 4; ++i) y[i] = s[i] + h * k3[i];
      const State k4 = rhs(y);
      for (int i = 0; i < 4; ++i) s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return s;
  }

  // (X(gamma(s)) - P_s X(p)) = s nabla_X X + s^2 B + ..., central in s.
  std::array<double, 2> advection(double t, double phi) const {
    const double h = 2e-4;
    const auto x0 = x(t, phi);
    std::array<double, 2> d[2];
    for (int k = 0; k < 2; ++k) {
      const double s = k == 0 ? h : -h;
      const State e = flow({t, phi, x0[0], x0[1]}, s, 8);
      const auto xe = x(e[0], e[1]);
      d[k] = {xe[0] - e[2], xe[1] - e[3]};
    }
    return {(d[0][0] - d[1][0]) / (2 * h), (d[0][1] - d[1][1]) / (2 * h)};
  }
};

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("torus: gradient, divergence, Laplacian and advection are exact for trig polynomials") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 64, 64);
    std::mt19937_64 rng(7);
    const TrigPoly f = TrigPoly::random(rng, 5), a = TrigPoly::random(rng, 4), b = TrigPoly::random(rng, 4);
    const ScalarField fs = testing::sample(c, f);
    const VectorField g = grad(fs);
    const VectorField x = VectorField::sample(c, a, b);
    const VectorField y = VectorField::sample(c, b, f);
    const ScalarField d = div(x);
    const VectorField adv = covariant_advection(x, y);
    const ScalarField lap = laplacian(fs);
    const auto& gr = c->grid();
    double eg = 0, ed = 0, ea = 0, el = 0;
    for (int i = 0; i < gr.nu; ++i) {
      for (int j = 0; j < gr.nv; ++j) {
        const double u = gr.u(i), v = gr.v(j);
        const std::size_t p = gr.index(i, j);
        eg = std::max({eg, std::abs(g.x1()[p] - f.du(u, v)), std::abs(g.x2()[p] - f.dv(u, v))});
        ed = std::max(ed, std::abs(d[p] - (a.du(u, v) + b.dv(u, v))));
        const double ex1 = a(u, v) * b.du(u, v) + b(u, v) * b.dv(u, v);
        const double ex2 = a(u, v) * f.du(u, v) + b(u, v) * f.dv(u, v);
        ea = std::max({ea, std::abs(adv.x1()[p] - ex1), std::abs(adv.x2()[p] - ex2)});
        double lapx = 0;
        for (const auto& t : f.terms) {
          lapx -= (t.ku * t.ku + t.kv * t.kv) *
                  (t.a * std::cos(t.ku * u + t.kv * v) + t.b * std::sin(t.ku * u + t.kv * v));
        }
        el = std::max(el, std::abs(lap[p] - lapx));
      }
    }
    CHECK(eg < 1e-10);
    CHECK(ed < 1e-10);
    CHECK(ea < 1e-10);
    CHECK(el < 1e-9);
  }

  TEST_CASE("symplectic gradient is divergence-free and orthogonal to grad psi") {
    for (const ChartPtr& c : {build_flat_torus(2 * kPi, 2 * kPi, 32, 32), build_sphere_band(0.5, 2.6, 48, 32)}) {
      const ScalarField psi = testing::sample(c, [](double u, double v) { return std::sin(2 * u) * std::cos(v) + u; });
      const VectorField x = symplectic_gradient(psi);
      CHECK(sup_norm(div(x)) < 1e-9);
      CHECK(sup_norm(metric_inner(x, grad(psi))) < 1e-9);
    }
  }

  TEST_CASE("divergence identity holds for random divergence-free fields") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 64, 64);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
      const VectorField x = symplectic_gradient(testing::sample(c, TrigPoly::random(rng, 4)));
      CHECK(sup_norm(divergence_identity_residual(x)) < 1e-8);
    }
    // Also for fields that are not divergence-free: the L_X(div X) term is live.
    const VectorField y = VectorField::sample(c, TrigPoly::random(rng, 3), TrigPoly::random(rng, 3));
    CHECK(sup_norm(divergence_identity_residual(y)) < 1e-8);
  }

  TEST_CASE("divergence identity on curved charts") {
    const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, 64, 128);
    std::mt19937_64 rng(5);
    const TrigPoly a = TrigPoly::random(rng, 2), b = TrigPoly::random(rng, 2);
    VectorField x = VectorField::sample(c, a, b);
    x *= 1.0 / sup_norm(x);  // unit amplitude; the residual is quadratic in X
    CHECK(sup_norm(divergence_identity_residual(x)) < 1e-6);
  }

  TEST_CASE("divergence identity converges under refinement near the band edges") {
    double prev = 0;
    for (int n : {64, 128}) {
      const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, n, 64);
      const ScalarField psi = testing::sample(c, [](double t, double p) {
        return std::pow(std::sin(3 * (t - kPi / 6)), 2) * (std::cos(p) + 0.5 * std::sin(2 * p));
      });
      const double r = sup_norm(divergence_identity_residual(symplectic_gradient(psi)));
      if (prev > 0) CHECK(std::log2(prev / r) > 3.5);
      prev = r;
    }
  }

  TEST_CASE("covariant advection on a surface of revolution matches parallel transport") {
    RevolutionOracle o;
    o.rho = [](double t) { return 1.5 + 0.3 * std::sin(2 * t); };
    o.drho = [](double t) { return 0.6 * std::cos(2 * t); };
    o.x = [](double t, double p) {
      return std::array<double, 2>{0.2 + 0.3 * std::sin(2 * t) * std::cos(p), std::cos(t) + 0.4 * std::sin(p)};
    };
    const ChartPtr c = build_revolution(Profile::from_expression("1.5 + 0.3*sin(2*t)"), {0.2, 2.9}, 64, 64);
    const VectorField x = VectorField::sample(
        c, [&](double t, double p) { return o.x(t, p)[0]; }, [&](double t, double p) { return o.x(t, p)[1]; });
    const VectorField adv = covariant_advection(x, x);
    const auto& g = c->grid();
    double err = 0;
    for (int i = 0; i < g.nu; i += 3) {
      for (int j = 0; j < g.nv; j += 5) {
        const auto ref = o.advection(g.u(i), g.v(j));
        const std::size_t p = g.index(i, j);
        err = std::max({err, std::abs(adv.x1()[p] - ref[0]), std::abs(adv.x2()[p] - ref[1])});
      }
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("meridional field: nabla_X X = (a a', 0)") {
    const ChartPtr c = build_sphere_band(0.4, 2.7, 64, 32);
    const VectorField x = VectorField::sample(c, [](double t, double) { return std::sin(3 * t); },
                                              [](double, double) { return 0.0; });
    const VectorField adv = covariant_advection(x, x);
    const auto& g = c->grid();
    double err = 0;
    for (int i = 0; i < g.nu; ++i) {
      const double t = g.u(i);
      for (int j = 0; j < g.nv; ++j) {
        const std::size_t p = g.index(i, j);
        err = std::max({err, std::abs(adv.x1()[p] - 3 * std::sin(3 * t) * std::cos(3 * t)), std::abs(adv.x2()[p])});
      }
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("Helmholtz decomposition recovers both parts on the torus") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 64, 64);
    std::mt19937_64 rng(3);
    const ScalarField a = testing::sample(c, TrigPoly::random(rng, 4));
    const ScalarField b = testing::sample(c, TrigPoly::random(rng, 4));
    const VectorField rot = symplectic_gradient(a), gr = grad(b);
    VectorField shift(c, std::vector<double>(c->size(), 0.7), std::vector<double>(c->size(), -0.2));
    const HelmholtzParts h = helmholtz_decompose(rot + gr + shift);
    CHECK(sup_norm(h.divergence_free - rot - shift) < 1e-10);
    CHECK(sup_norm(h.gradient_part - gr) < 1e-10);
    CHECK(std::abs(integrate(h.potential)) < 1e-10);
    CHECK(std::abs(l2_inner(h.divergence_free, h.gradient_part)) < 1e-9);
  }

  TEST_CASE("Helmholtz decomposition on a band: tangent, divergence-free, orthogonal") {
    const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, 64, 64);
    const VectorField x = VectorField::sample(c, [](double t, double p) { return std::cos(t) + std::sin(p); },
                                              [](double t, double p) { return std::sin(2 * t) * std::cos(p); });
    const HelmholtzParts h = helmholtz_decompose(x);
    CHECK(sup_norm(h.divergence_free + h.gradient_part - x) < 1e-12);
    // The boundary rows carry the Neumann condition instead of the equation, so
    // div P(X) there is a discretization error; the interior is at round-off.
    const ScalarField d = div(h.divergence_free);
    const auto& g = c->grid();
    double interior = 0, edge = 0;
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) {
        double& m = (i == 0 || i == g.nu - 1) ? edge : interior;
        m = std::max(m, std::abs(d[g.index(i, j)]));
      }
    }
    CHECK(interior < 1e-10);
    CHECK(edge < 1e-5);
    CHECK(std::abs(l2_inner(h.divergence_free, h.gradient_part)) < 1e-6 * l2_norm(x) * l2_norm(x));
    for (const auto& b : c->boundary()) {
      for (int j = 0; j < c->grid().nv; ++j) {
        REQUIRE(std::abs(h.divergence_free.x1()[c->grid().index(b.row, j)]) < 1e-6);
      }
    }
  }

  TEST_CASE("inverse Laplacian") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 32, 32);
    const ScalarField f = testing::sample(c, [](double u, double v) { return std::cos(u) * std::sin(2 * v); });
    const ScalarField p = inverse_laplacian(f);
    CHECK(sup_norm(laplacian(p) - f) < 1e-12);
    CHECK(sup_norm(p + (1.0 / 5) * f) < 1e-12);
    CHECK_THROWS_AS(inverse_laplacian(ScalarField(c, 1.0)), InconsistentInput);
  }

  TEST_CASE("covariant Hessian determinant of a rank-one Hessian vanishes") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 32, 32);
    const ScalarField psi = testing::sample(c, [](double u, double v) { return std::sin(u + 2 * v) + 0.3 * std::cos(2 * u + 4 * v); });
    CHECK(sup_norm(covariant_hessian_det(psi)) < 1e-8);
  }

  TEST_CASE("quadrature and norms") {
    const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, 32, 32);
    const ScalarField one(c, 1.0);
    CHECK(integrate(one) == doctest::Approx(2 * kPi * std::sqrt(3.0)).epsilon(1e-10));
    CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2 * kPi * std::sqrt(3.0))).epsilon(1e-10));
    const ScalarField cosu = testing::sample(c, [](double t, double) { return std::cos(t); });
    CHECK(std::abs(integrate(cosu)) < 1e-12);
  }

  TEST_CASE("mismatched charts are rejected") {
    const ChartPtr a = build_flat_torus(1, 1, 16, 16), b = build_flat_torus(1, 1, 16, 16);
    CHECK_THROWS_AS(covariant_advection(VectorField(a), VectorField(b)), InvalidArgument);
  }
}
