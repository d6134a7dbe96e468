// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "geohydro/error.hpp"
#include "geohydro/geodesic.hpp"
#include "geohydro/surface.hpp"
#include "support.hpp"

using namespace geohydro;
using geohydro::testing::kPi;
using geohydro::testing::TrigPoly;

namespace {

ChartPtr torus(int n = 64) { return build_flat_torus(2 * kPi, 2 * kPi, n, n); }

VectorField sin_v(const ChartPtr& c) {
  return VectorField::sample(c, [](double, double v) { return std::sin(v); }, [](double, double) { return 0.0; });
}

VectorField sin_v_sin_u(const ChartPtr& c) {
  return VectorField::sample(c, [](double, double v) { return std::sin(v); },
                             [](double u, double) { return std::sin(u); });
}

// Zero-mean random divergence-free field with unit sup amplitude.
VectorField random_field(const ChartPtr& c, std::uint64_t seed, int order = 3) {
  std::mt19937_64 rng(seed);
  VectorField x = symplectic_gradient(testing::sample(c, TrigPoly::random(rng, order)));
  x *= 1.0 / sup_norm(x);
  return x;
}

double max_map_diff(const MapSamples& a, const MapSamples& b) {
  double m = 0;
  for (std::size_t p = 0; p < a.size(); ++p)
    m = std::max({m, std::abs(a.u[p] - b.u[p]), std::abs(a.v[p] - b.v[p])});
  return m;
}

using Vec3 = std::array<double, 3>;
Vec3 embed(double t, double f) { return {std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), -std::cos(t)}; }

}  // namespace

TEST_SUITE("geodesic") {
  TEST_CASE("identity map has unit Jacobian and zero distance") {
    const ChartPtr c = build_sphere_band(0.5, 2.5, 32, 32);
    const MapSamples id = MapSamples::identity(c);
    const ScalarField jac = jacobian_determinant(id);
    for (double j : jac.samples()) REQUIRE(j == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(map_distance(id, id) == 0.0);
  }

  TEST_CASE("map distance of a rigid shift") {
    const ChartPtr c = torus(32);
    MapSamples a = MapSamples::identity(c), b = a;
    for (double& u : b.u) u += 0.25;
    // |shift|^2 times the area.
    CHECK(map_distance(a, b) == doctest::Approx(0.25 * 2 * kPi).epsilon(1e-12));
  }

  TEST_CASE("invert_map undoes a smooth torus map") {
    const ChartPtr c = torus(64);
    MapSamples eta = MapSamples::identity(c);
    for (std::size_t p = 0; p < eta.size(); ++p) {
      eta.u[p] += 0.2 * std::sin(eta.v[p]);
      eta.v[p] += 0.1 * std::cos(eta.u[p]);
    }
    const MapSamples inv = invert_map(eta);
    // eta(inv(y)) = y, checked with the closed form of eta.
    double err = 0;
    const MapSamples id = MapSamples::identity(c);
    for (std::size_t p = 0; p < inv.size(); ++p) {
      const double uu = inv.u[p] + 0.2 * std::sin(inv.v[p]);
      const double vv = inv.v[p] + 0.1 * std::cos(uu);
      err = std::max({err, std::abs(uu - id.u[p]), std::abs(vv - id.v[p])});
    }
    CHECK(err < 1e-8);
  }

  TEST_CASE("Burgers on the torus is the straight-line map") {
    const ChartPtr c = torus();
    const VectorField x0 = random_field(c, 3);
    FlowOptions o;
    o.save_times = {0.1, 0.3};
    const DiffeoPath path = burgers_flow(x0, 0.3, 0, o);
    REQUIRE(path.times.size() == 3);
    CHECK(max_map_diff(path.maps[0], MapSamples::identity(c)) == 0.0);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      MapSamples exact = MapSamples::identity(c);
      for (std::size_t p = 0; p < exact.size(); ++p) {
        exact.u[p] += path.times[k] * x0.x1()[p];
        exact.v[p] += path.times[k] * x0.x2()[p];
      }
      CHECK(max_map_diff(path.maps[k], exact) < 1e-14);
    }
  }

  TEST_CASE("plane-parallel and constant Burgers flows") {
    const ChartPtr c = torus(32);
    const DiffeoPath a = burgers_flow(sin_v(c), 1.0, 0);
    const MapSamples& end = a.maps.back();
    for (std::size_t p = 0; p < end.size(); ++p) {
      REQUIRE(end.u[p] == doctest::Approx(c->grid().u(p / 32) + std::sin(c->grid().v(p % 32))).epsilon(1e-14));
    }
    const VectorField k = VectorField::sample(c, [](double, double) { return 0.7; }, [](double, double) { return -0.2; });
    FlowOptions o;
    o.spatial_velocity = true;
    const DiffeoPath b = burgers_flow(k, 2.0, 8, o);
    for (const auto& v : b.velocities) CHECK(sup_norm(v - k) < 1e-12);
  }

  TEST_CASE("Burgers caustic from scalar characteristics") {
    const ChartPtr c = torus();
    const VectorField x0 = grad(testing::sample(c, [](double u, double) { return 0.1 * std::cos(u); }));
    CHECK(burgers_caustic_time(x0) == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(burgers_caustic_time(sin_v(c)) == std::numeric_limits<double>::infinity());
    // 1D characteristics: eta_u = u - 0.1 t sin u.
    const DiffeoPath path = burgers_flow(x0, 0.5, 0);
    const MapSamples& e = path.maps.back();
    for (int i = 0; i < 64; ++i) {
      const double u = c->grid().u(i);
      REQUIRE(std::abs(e.u[c->grid().index(i, 5)] - (u - 0.05 * std::sin(u))) < 1e-10);
    }
    CHECK_THROWS_AS(burgers_flow(x0, 12.0, 0), CausticError);
  }

  TEST_CASE("Burgers on the sphere band follows great circles") {
    const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, 64, 64);
    // X0 = d/dphi: speed sin(t0), tangent to the latitude circle.
    const VectorField x0 = VectorField::sample(c, [](double, double) { return 0.0; }, [](double, double) { return 1.0; });
    const double tf = 0.4;
    const DiffeoPath path = burgers_flow(x0, tf, 400);
    const MapSamples& e = path.maps.back();
    double err = 0;
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; j += 7) {
        const double t0 = c->grid().u(i), f0 = c->grid().v(j);
        const Vec3 p = embed(t0, f0);
        const Vec3 dir{-std::sin(f0), std::cos(f0), 0.0};
        const double s = std::sin(t0) * tf;
        Vec3 q;
        for (int k = 0; k < 3; ++k) q[k] = std::cos(s) * p[k] + std::sin(s) * dir[k];
        const Vec3 r = embed(e.u[c->grid().index(i, j)], e.v[c->grid().index(i, j)]);
        for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(r[k] - q[k]));
      }
    }
    CHECK(err < 1e-8);
  }

  TEST_CASE("Euler: steady flows stay steady") {
    const ChartPtr c = torus();
    for (const VectorField& x0 : {sin_v(c), sin_v_sin_u(c)}) {
      FlowOptions o;
      o.spatial_velocity = true;
      const DiffeoPath path = euler_flow(x0, 1.0, 256, o);
      for (const auto& v : path.velocities) CHECK(sup_norm(v - x0) < 1e-8);
    }
  }

  TEST_CASE("Euler: zero field gives the identity path") {
    const ChartPtr c = torus(32);
    const DiffeoPath path = euler_flow(VectorField(c), 1.0, 16);
    for (const auto& m : path.maps) CHECK(max_map_diff(m, MapSamples::identity(c)) == 0.0);
  }

  TEST_CASE("Euler conserves energy and enstrophy for a random field") {
    const ChartPtr c = torus();
    const DiffeoPath path = euler_flow(random_field(c, 11, 4), 1.0, 512);
    REQUIRE(path.energy.size() >= 2);
    const double e0 = path.energy.front(), z0 = path.enstrophy.front();
    double de = 0, dz = 0;
    for (std::size_t k = 0; k < path.energy.size(); ++k) {
      de = std::max(de, std::abs(path.energy[k] - e0) / e0);
      dz = std::max(dz, std::abs(path.enstrophy[k] - z0) / z0);
    }
    CHECK(de < 1e-6);
    CHECK(dz < 1e-5);
    // The velocity actually changes: this is not a steady flow.
    CHECK(max_map_diff(path.maps.back(), MapSamples::identity(c)) > 0.1);
  }

  TEST_CASE("Euler particle maps preserve area") {
    // Low order keeps the Lagrangian map resolved on the grid up to t = 1.
    const ChartPtr c = torus();
    FlowOptions o;
    o.save_times = {0.25, 0.5, 0.75, 1.0};
    const DiffeoPath path = euler_flow(random_field(c, 11, 2), 1.0, 512, o);
    for (const auto& m : path.maps) {
      const ScalarField jac = jacobian_determinant(m);
      for (double j : jac.samples()) REQUIRE(std::abs(j - 1) < 1e-3);
    }
  }

  TEST_CASE("Euler rejects a CFL number above 0.85") {
    const ChartPtr c = torus(64);
    CHECK_THROWS(euler_flow(10.0 * sin_v_sin_u(c), 1.0, 4));
  }

  TEST_CASE("pressure fields") {
    const ChartPtr c = torus();
    CHECK(sup_norm(pressure_field(sin_v(c))) < 1e-12);
    const VectorField k = VectorField::sample(c, [](double, double) { return 1.0; }, [](double, double) { return 2.0; });
    CHECK(sup_norm(pressure_field(k)) < 1e-12);
    const ScalarField exact = testing::sample(c, [](double u, double v) { return std::cos(u) * std::cos(v); });
    CHECK(sup_norm(pressure_field(sin_v_sin_u(c)) - exact) < 1e-10);
  }

  TEST_CASE("second fundamental form") {
    const ChartPtr c = torus();
    CHECK(sup_norm(second_fundamental_form(sin_v(c), sin_v(c))) < 1e-12);
    const VectorField x = sin_v_sin_u(c);
    const VectorField s = second_fundamental_form(x, x);
    // nabla_X X is already a gradient here, so s(X,X) = nabla_X X.
    CHECK(sup_norm(s - covariant_advection(x, x)) < 1e-10);
    CHECK(sup_norm(div(s) - testing::sample(c, [](double u, double v) { return 2 * std::cos(u) * std::cos(v); })) <
          1e-10);
    const VectorField y = random_field(c, 5);
    const double a = 1.7, b = -0.35;
    CHECK(sup_norm(second_fundamental_form(a * x, b * y) - (a * b) * second_fundamental_form(x, y)) < 1e-11);
  }

  TEST_CASE("second fundamental form vanishes exactly for asymptotic fields") {
    const ChartPtr c = torus();
    for (std::uint64_t seed : {1, 2, 3}) {
      const VectorField x = random_field(c, seed);
      const bool asym = asymptotic_residuals(x).all_pass();
      CHECK(asym == (sup_norm(second_fundamental_form(x, x)) < 1e-8));
    }
    const VectorField pp = VectorField::sample(c, [](double u, double v) { return std::cos(u + 2 * v); },
                                               [](double u, double v) { return -0.5 * std::cos(u + 2 * v); });
    CHECK(asymptotic_residuals(pp).all_pass());
    CHECK(sup_norm(second_fundamental_form(pp, pp)) < 1e-8);
  }

  TEST_CASE("second fundamental form needs divergence-free fields") {
    const ChartPtr c = torus(32);
    const VectorField g = grad(testing::sample(c, [](double u, double) { return std::cos(u); }));
    CHECK_THROWS_AS(second_fundamental_form(g, g), PreconditionError);
  }

  TEST_CASE("tangency: plane-parallel and zero fields coincide") {
    const ChartPtr c = torus(32);
    const TangencyFit a = tangency_order(sin_v(c));
    CHECK(a.outcome == "exact coincidence");
    for (double d : a.distances) CHECK(d < 1e-9);
    const TangencyFit z = tangency_order(VectorField(c));
    CHECK(z.outcome == "exact coincidence");
    for (double d : z.distances) CHECK(d == 0.0);
  }

  TEST_CASE("tangency: generic field separates at second order") {
    const ChartPtr c = torus(32);
    const VectorField x0 = random_field(c, 8);
    const TangencyFit f = tangency_order(x0);
    CHECK(f.outcome == "fit");
    CHECK(std::abs(f.fitted_exponent - 2.0) < 0.15);
    CHECK(f.fit_points >= 3);
    const double gp = l2_norm(grad(pressure_field(x0)));
    CHECK(f.pressure_gradient_norm == doctest::Approx(gp).epsilon(1e-10));
    CHECK(std::abs(f.d2_at_zero * f.d2_at_zero / (gp * gp) - 1) < 0.05);
  }
}
