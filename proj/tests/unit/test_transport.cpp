// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "geohydro/asymptotic.hpp"
#include "geohydro/error.hpp"
#include "geohydro/surface.hpp"
#include "geohydro/transport.hpp"
#include "support.hpp"

using namespace geohydro;
using geohydro::testing::kPi;

namespace {

ChartPtr torus(int n = 64) { return build_flat_torus(2 * kPi, 2 * kPi, n, n); }

Density cosine_density(const ChartPtr& c, double eps) {
  return Density::normalized(testing::sample(c, [eps](double u, double) { return 1 + eps * std::cos(u); }));
}

// Monotone rearrangement of the uniform density onto 1 + eps cos:
// T + eps sin T = x.
double cdf_map(double x, double eps) {
  double t = x;
  for (int k = 0; k < 60; ++k) {
    const double dt = (t + eps * std::sin(t) - x) / (1 + eps * std::cos(t));
    t -= dt;
    if (std::abs(dt) < 1e-16) break;
  }
  return t;
}

// Solves x + a(x) = y for a smooth periodic perturbation a.
template <class F, class DF>
double invert_1d(double y, F a, DF da) {
  double x = y;
  for (int k = 0; k < 60; ++k) {
    const double dx = (x + a(x) - y) / (1 + da(x));
    x -= dx;
    if (std::abs(dx) < 1e-16) break;
  }
  return x;
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("densities are normalized and positive") {
    const ChartPtr c = torus(32);
    const Density m = cosine_density(c, 0.5);
    CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Density::uniform(c)[0] == doctest::Approx(1 / (4 * kPi * kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(Density::normalized(testing::sample(c, [](double u, double) { return std::cos(u); })),
                    InvalidArgument);
  }

  TEST_CASE("pushforward by the identity and by a rigid shift") {
    const ChartPtr c = torus();
    const Density m = Density::normalized(
        testing::sample(c, [](double u, double v) { return 1 + 0.3 * std::cos(u) * std::sin(2 * v); }));
    const Density same = pushforward(MapSamples::identity(c), m);
    CHECK(testing::max_abs_diff(same.samples(), m.samples()) < 1e-14);

    MapSamples eta = MapSamples::identity(c);
    const double su = 0.37, sv = -1.1;
    for (std::size_t p = 0; p < eta.size(); ++p) {
      eta.u[p] += su;
      eta.v[p] += sv;
    }
    const Density n = pushforward(eta, m);
    // The modulation vanishes at the origin, so m[0] is the normalization.
    const ScalarField exact = testing::sample(c, [&](double u, double v) {
      return m[0] * (1 + 0.3 * std::cos(u - su) * std::sin(2 * (v - sv)));
    });
    CHECK(testing::max_abs_diff(n.samples(), exact.samples()) < 1e-10);
    CHECK(n.mass() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("pushforward along a 1D gradient map") {
    const ChartPtr c = torus();
    const Density m = Density::uniform(c);
    const double t = 0.8;
    const TransportPotential phi{testing::sample(c, [](double u, double) { return 0.1 * std::cos(u); })};
    const Density n = pushforward(phi.map(t), m);
    // n(y) = m / (1 - 0.1 t cos x) with y = x - 0.1 t sin x.
    double err = 0;
    for (int i = 0; i < 64; ++i) {
      const double y = c->grid().u(i);
      const double x = invert_1d(
          y, [t](double s) { return -0.1 * t * std::sin(s); }, [t](double s) { return -0.1 * t * std::cos(s); });
      const double exact = m[0] / (1 - 0.1 * t * std::cos(x));
      err = std::max(err, std::abs(n[c->grid().index(i, 3)] - exact));
    }
    CHECK(err < 1e-6 * m[0]);
  }

  TEST_CASE("pushforward rejects folded maps") {
    const ChartPtr c = torus(32);
    const TransportPotential phi{testing::sample(c, [](double u, double) { return 2 * std::cos(u); })};
    CHECK_FALSE(phi.convex());
    CHECK_THROWS_AS(pushforward(phi.map(), Density::uniform(c)), PreconditionError);
  }

  TEST_CASE("transport residual for trivial potentials") {
    const ChartPtr c = torus(32);
    const TransportPotential zero{ScalarField(c)};
    const Density m = Density::uniform(c), n = cosine_density(c, 0.3);
    CHECK(sup_norm(transport_residual(zero, m, m)) < 1e-14);
    const ScalarField r = transport_residual(zero, m, n);
    for (std::size_t p = 0; p < c->size(); ++p) REQUIRE(r[p] == doctest::Approx(1 - m[p] / n[p]).epsilon(1e-14));
  }

  TEST_CASE("equal densities need no transport") {
    const ChartPtr c = torus(32);
    const Density m = cosine_density(c, 0.4);
    const TransportSolution s = solve_transport(m, m);
    CHECK(s.converged);
    CHECK(s.iterations == 0);
    CHECK(sup_norm(s.potential.u) == 0.0);
  }

  TEST_CASE("1D pair matches the monotone rearrangement") {
    const ChartPtr c = torus();
    const double eps = 0.2;
    const Density m = Density::uniform(c), n = cosine_density(c, eps);
    const TransportSolution s = solve_transport(m, n, 1e-12);
    REQUIRE(s.converged);
    CHECK(sup_norm(transport_residual(s.potential, m, n)) < 1e-10);
    CHECK(s.potential.convex());
    const MapSamples eta = s.potential.map();
    double err = 0, side = 0;
    for (std::size_t p = 0; p < eta.size(); ++p) {
      const double x = c->grid().u(p / 64), y = c->grid().v(p % 64);
      err = std::max(err, std::abs(eta.u[p] - cdf_map(x, eps)));
      side = std::max(side, std::abs(eta.v[p] - y));
    }
    CHECK(err < 1e-8);
    CHECK(side < 1e-12);
    // Residual history is monotone under the damping rule.
    for (std::size_t k = 1; k < s.residual_history.size(); ++k)
      CHECK(s.residual_history[k] < s.residual_history[k - 1]);
  }

  TEST_CASE("product densities give a separable potential") {
    const ChartPtr c = torus();
    const double eps = 0.2;
    const Density m = Density::uniform(c);
    const Density n = Density::normalized(testing::sample(
        c, [eps](double u, double v) { return (1 + eps * std::cos(u)) * (1 + eps * std::cos(v)); }));
    const TransportSolution s = solve_transport(m, n, 1e-12);
    REQUIRE(s.converged);
    const MapSamples eta = s.potential.map();
    double err = 0;
    for (std::size_t p = 0; p < eta.size(); ++p) {
      const double x = c->grid().u(p / 64), y = c->grid().v(p % 64);
      err = std::max({err, std::abs(eta.u[p] - cdf_map(x, eps)), std::abs(eta.v[p] - cdf_map(y, eps))});
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("solver honours the iteration budget") {
    const ChartPtr c = torus(32);
    const TransportSolution s = solve_transport(Density::uniform(c), cosine_density(c, 0.3), 1e-14, 1);
    CHECK_FALSE(s.converged);
    CHECK(s.iterations == 1);
    CHECK(s.residual_history.size() == 2);
  }

  TEST_CASE("displacement interpolation endpoints and midpoint") {
    const ChartPtr c = torus();
    const double eps = 0.2;
    const Density m = Density::uniform(c), n = cosine_density(c, eps);
    const TransportSolution s = solve_transport(m, n, 1e-12);
    REQUIRE(s.converged);
    const Interpolant i0 = displacement_interpolation(s.potential, m, 0.0);
    CHECK(testing::max_abs_diff(i0.rho.samples(), m.samples()) == 0.0);
    const Interpolant i1 = displacement_interpolation(s.potential, m, 1.0);
    CHECK(testing::max_abs_diff(i1.rho.samples(), n.samples()) < 1e-8 * m[0]);

    // 1D oracle: y = x + (T(x) - x)/2, rho(y) = m / (1 + (T'(x) - 1)/2).
    const Interpolant h = displacement_interpolation(s.potential, m, 0.5);
    double err = 0;
    for (int i = 0; i < 64; ++i) {
      const double y = c->grid().u(i);
      const double x = invert_1d(
          y, [eps](double z) { return 0.5 * (cdf_map(z, eps) - z); },
          [eps](double z) { return 0.5 * (1 / (1 + eps * std::cos(cdf_map(z, eps))) - 1); });
      const double tp = 1 / (1 + eps * std::cos(cdf_map(x, eps)));
      err = std::max(err, std::abs(h.rho[c->grid().index(i, 7)] - m[0] / (1 + 0.5 * (tp - 1))));
    }
    CHECK(err < 1e-6 * m[0]);
  }

  TEST_CASE("interpolated densities keep unit mass and the guard holds") {
    const ChartPtr c = torus();
    const Density m = Density::normalized(
        testing::sample(c, [](double u, double v) { return 1 + 0.2 * std::sin(u + v); }));
    const Density n = Density::normalized(
        testing::sample(c, [](double u, double v) { return 1 + 0.3 * std::cos(u) * std::cos(2 * v); }));
    const TransportSolution s = solve_transport(m, n, 1e-11);
    REQUIRE(s.converged);
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      TransportPotential scaled{t * s.potential.u};
      CHECK(scaled.convex());
      CHECK(displacement_interpolation(s.potential, m, t).rho.mass() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("interpolation of a non-convex potential throws") {
    const ChartPtr c = torus(32);
    const TransportPotential phi{testing::sample(c, [](double u, double) { return 2 * std::cos(u); })};
    CHECK_NOTHROW(displacement_interpolation(phi, Density::uniform(c), 0.1));
    CHECK_THROWS_AS(displacement_interpolation(phi, Density::uniform(c), 0.9), Error);
  }

  TEST_CASE("submersion check: zero potential") {
    const ChartPtr c = torus(32);
    const ResidualReport r = submersion_check(TransportPotential{ScalarField(c)}, Density::uniform(c), 5);
    for (const auto& e : r.entries()) CHECK(e.value < 1e-14);
  }

  TEST_CASE("submersion check: 1D pair") {
    const ChartPtr c = torus();
    const Density m = Density::uniform(c), n = cosine_density(c, 0.2);
    const TransportSolution s = solve_transport(m, n, 1e-12);
    REQUIRE(s.converged);
    const ResidualReport r = submersion_check(s.potential, m, 5);
    CHECK(r.entry("burgers_coincidence").value < 1e-10);
    CHECK(r.entry("horizontality").value < 1e-6);
    CHECK(r.entry("projection").value < 1e-6);
    CHECK(r.entry("action_vs_cost").value < 1e-4);
    CHECK(r.all_pass());
    // Wasserstein cost of the 1D rearrangement: integral of (T(x) - x)^2 m.
    double cost = 0;
    for (int i = 0; i < 64; ++i) {
      const double x = c->grid().u(i);
      cost += std::pow(cdf_map(x, 0.2) - x, 2) * (2 * kPi / 64) * (2 * kPi) * m[0];
    }
    CHECK(r.metric("cost") == doctest::Approx(cost).epsilon(1e-8));
  }

  TEST_CASE("vertical departure: plane-parallel fields") {
    const ChartPtr c = torus();
    for (const auto& dir : {std::pair{1.0, 0.0}, std::pair{1.0, 2.0}, std::pair{-3.0, 1.0}}) {
      const double a = dir.first, b = dir.second;
      // X = f(a u + b v) (b, -a) is divergence-free with nabla_X X = 0.
      const VectorField x = VectorField::sample(
          c, [=](double u, double v) { return b * std::sin(a * u + b * v) / std::hypot(a, b); },
          [=](double u, double v) { return -a * std::sin(a * u + b * v) / std::hypot(a, b); });
      REQUIRE(asymptotic_residuals(x).all_pass());
      const ResidualReport r = vertical_departure_rate(x, 1e-3);
      CHECK(r.entry("first_derivative").value < 1e-6);
      CHECK(r.entry("second_derivative").value < 1e-6);
    }
  }

  TEST_CASE("vertical departure: (sin v, sin u) accelerates away") {
    const ChartPtr c = torus();
    const VectorField x = VectorField::sample(c, [](double, double v) { return std::sin(v); },
                                              [](double u, double) { return std::sin(u); });
    const ResidualReport r = vertical_departure_rate(x, 1e-3);
    CHECK(r.entry("first_derivative").value < 1e-6);
    // d^2 rho / dt^2 = -2 m det DX = 2 m cos u cos v, whose L2 norm is 1/(2 pi).
    CHECK(r.entry("second_derivative").value == doctest::Approx(1 / (2 * kPi)).epsilon(1e-4));
    CHECK_FALSE(r.all_pass());
  }

  TEST_CASE("vertical departure preconditions") {
    const ChartPtr c = torus(32);
    const VectorField g = grad(testing::sample(c, [](double u, double) { return std::cos(u); }));
    CHECK_THROWS_AS(vertical_departure_rate(g, 1e-3), PreconditionError);
    const VectorField x = VectorField::sample(c, [](double, double v) { return std::sin(v); },
                                              [](double, double) { return 0.0; });
    CHECK_THROWS_AS(vertical_departure_rate(x, 1e-7), InvalidArgument);
    CHECK_THROWS_AS(vertical_departure_rate(VectorField::sample(build_sphere_band(0.5, 2.5, 32, 32),
                                                                [](double, double) { return 0.0; },
                                                                [](double, double) { return 1.0; }),
                                            1e-3),
                    PreconditionError);
  }
}
