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

namespace {

using Vec3 = std::array<double, 3>;
using Embedding = std::function<Vec3(double, double)>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Geodesic curvature of the circle t = t0 against the inward unit conormal,
// from finite differences of the embedding only.
double embedded_kg(const Embedding& r, double t0, double phi, bool inward_is_plus_t) {
  const double h = 1e-4;
  const Vec3 c0 = r(t0, phi), cp = r(t0, phi + h), cm = r(t0, phi - h);
  Vec3 c1, c2;
  for (int k = 0; k < 3; ++k) {
    c1[k] = (cp[k] - cm[k]) / (2 * h);
    c2[k] = (cp[k] - 2 * c0[k] + cm[k]) / (h * h);
  }
  // Arc-length acceleration; the circle has constant speed.
  const double speed2 = dot(c1, c1);
  Vec3 acc{c2[0] / speed2, c2[1] / speed2, c2[2] / speed2};
  Vec3 rt = sub(r(t0 + h, phi), r(t0 - h, phi));
  const double n = std::sqrt(dot(rt, rt));
  for (double& x : rt) x /= n;
  return (inward_is_plus_t ? 1.0 : -1.0) * dot(acc, rt);
}

// Brioschi formula for an orthogonal metric E du^2 + G dv^2 with E = 1 and
// G depending on u only, evaluated by central differences.
double brioschi_k(const std::function<double(double)>& rho, double t) {
  const double h = 1e-3;
  auto G = [&](double s) { return rho(s) * rho(s); };
  auto term = [&](double s) {
    const double gu = (G(s + h) - G(s - h)) / (2 * h);
    return gu / std::sqrt(G(s));
  };
  const double dterm = (term(t + h) - term(t - h)) / (2 * h);
  return -dterm / (2 * std::sqrt(G(t)));
}

}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("flat torus is flat with identity metric") {
    const ChartPtr c = build_flat_torus(2 * kPi, 2 * kPi, 64, 64);
    CHECK(c->kind() == ChartKind::FlatTorus);
    CHECK_FALSE(c->has_boundary());
    for (std::size_t p = 0; p < c->size(); ++p) {
      REQUIRE(c->curvature()[p] == 0.0);
      REQUIRE(c->sqrt_det_g()[p] == 1.0);
      REQUIRE(c->g11()[p] == 1.0);
      REQUIRE(c->g12()[p] == 0.0);
      REQUIRE(c->g22()[p] == 1.0);
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (double g : c->christoffel(i, j, k)) REQUIRE(g == 0.0);
    CHECK(c->area() == doctest::Approx(4 * kPi * kPi).epsilon(1e-12));
  }

  TEST_CASE("torus grid spacing") {
    const ChartPtr c = build_flat_torus(2 * kPi, 4 * kPi, 32, 64);
    CHECK(c->grid().du() == doctest::Approx(2 * kPi / 32).epsilon(1e-15));
    CHECK(c->grid().dv() == doctest::Approx(4 * kPi / 64).epsilon(1e-15));
  }

  TEST_CASE("grid counts are validated") {
    CHECK_THROWS_AS(build_flat_torus(1, 1, 31, 32), InvalidArgument);
    CHECK_THROWS_AS(build_flat_torus(1, 1, 6, 32), InvalidArgument);
    CHECK_THROWS_AS(build_flat_torus(-1, 1, 32, 32), InvalidArgument);
    CHECK_THROWS_AS(build_sphere_band(0.0, 1.0, 32, 32), InvalidArgument);
    CHECK_THROWS_AS(build_sphere_band(1.0, kPi, 32, 32), InvalidArgument);
  }

  TEST_CASE("nonpositive profile is rejected") {
    const Profile p = Profile::from_expression("t - 1");
    CHECK_THROWS_AS(build_revolution(p, {0.5, 2.0}, 32, 32), InvalidArgument);
  }

  TEST_CASE("sphere band has unit curvature") {
    const ChartPtr c = build_sphere_band(kPi / 6, 5 * kPi / 6, 64, 128);
    for (double k : c->curvature()) REQUIRE(std::abs(k - 1.0) < 1e-6);
  }

  TEST_CASE("sphere band area matches the zonal formula") {
    const ChartPtr c = build_sphere_band(kPi / 4, 3 * kPi / 4, 32, 64);
    const double exact = 2 * kPi * (std::cos(kPi / 4) - std::cos(3 * kPi / 4));
    CHECK(std::abs(c->area() - exact) < 1e-6);
  }

  TEST_CASE("sphere band boundary kg against the embedding") {
    const double lo = kPi / 2 - 0.1, hi = kPi / 2 + 0.1;
    const ChartPtr c = build_sphere_band(lo, hi, 16, 128);
    const Embedding r = [](double t, double f) {
      return Vec3{std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), -std::cos(t)};
    };
    REQUIRE(c->boundary().size() == 2);
    for (const auto& b : c->boundary()) {
      const bool umin = b.which_edge == Edge::UMin;
      const double t0 = umin ? lo : hi;
      for (int j = 0; j < c->grid().nv; j += 17) {
        const double oracle = embedded_kg(r, t0, c->grid().v(j), umin);
        CHECK(std::abs(b.kg[j] - oracle) < 1e-4);
        CHECK(std::abs(std::abs(b.kg[j]) - std::abs(1 / std::tan(t0))) < 1e-4);
      }
    }
  }

  TEST_CASE("flat annulus: zero curvature, kg from the embedding") {
    const ChartPtr c = build_revolution(Profile::from_expression("t"), {1.0, 2.0}, 32, 64);
    for (double k : c->curvature()) REQUIRE(std::abs(k) < 1e-12);
    const Embedding r = [](double t, double f) { return Vec3{t * std::cos(f), t * std::sin(f), 0.0}; };
    for (const auto& b : c->boundary()) {
      const bool umin = b.which_edge == Edge::UMin;
      const double t0 = umin ? 1.0 : 2.0;
      for (int j = 0; j < c->grid().nv; j += 9) {
        CHECK(std::abs(b.kg[j] - embedded_kg(r, t0, c->grid().v(j), umin)) < 1e-6);
      }
      CHECK(std::abs(b.kg[0]) == doctest::Approx(1.0 / t0).epsilon(1e-10));
    }
  }

  TEST_CASE("boundary normals are outward unit vectors") {
    const ChartPtr c = build_sphere_band(0.4, 2.5, 32, 32);
    for (const auto& b : c->boundary()) {
      const int i = b.row;
      for (int j = 0; j < c->grid().nv; ++j) {
        const std::size_t p = c->grid().index(i, j);
        const double nu = b.normal_u[j], nv = b.normal_v[j];
        const double len2 = c->g11()[p] * nu * nu + 2 * c->g12()[p] * nu * nv + c->g22()[p] * nv * nv;
        REQUIRE(len2 == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE((b.which_edge == Edge::UMin ? nu < 0 : nu > 0));
      }
    }
  }

  TEST_CASE("torus of revolution curvature against the Brioschi formula") {
    const auto rho = [](double t) { return 2 + std::cos(t); };
    const ChartPtr c = build_revolution(Profile::from_expression("2 + cos(t)"), {0, 2 * kPi}, 64, 64, true);
    CHECK_FALSE(c->has_boundary());
    for (int i = 0; i < c->grid().nu; ++i) {
      const double t = c->grid().u(i);
      const double k = c->curvature()[c->grid().index(i, 3)];
      REQUIRE(std::abs(k - brioschi_k(rho, t)) < 1e-6);
      REQUIRE(std::abs(k - std::cos(t) / (2 + std::cos(t))) < 1e-6);
    }
  }

  TEST_CASE("sampled profile reproduces the analytic chart") {
    const Interval range{kPi / 5, 4 * kPi / 5};
    const ChartPtr a = build_sphere_band(range.lo, range.hi, 64, 32);
    std::vector<double> rho(64);
    for (int i = 0; i < 64; ++i) rho[i] = std::sin(a->grid().u(i));
    const ChartPtr b = build_revolution_from_samples(rho, range, 32);
    CHECK(testing::max_abs_diff(a->curvature(), b->curvature()) < 1e-6);
    CHECK(testing::max_abs_diff(a->boundary()[0].kg, b->boundary()[0].kg) < 1e-8);
  }

  TEST_CASE("Gauss-Bonnet sum vanishes on bands and annuli") {
    CHECK(std::abs(gauss_bonnet_sum(*build_sphere_band(kPi / 6, 5 * kPi / 6, 64, 64))) < 1e-3);
    CHECK(std::abs(gauss_bonnet_sum(*build_sphere_band(0.3, 1.2, 32, 32))) < 1e-3);
    CHECK(std::abs(gauss_bonnet_sum(*build_revolution(Profile::from_expression("t"), {1, 2}, 32, 32))) < 1e-3);
    CHECK(std::abs(gauss_bonnet_sum(*build_revolution(Profile::from_expression("1.5 + 0.5*sin(2*t)"),
                                                      {0.2, 2.9}, 64, 32))) < 1e-3);
    CHECK(std::abs(gauss_bonnet_sum(
              *build_revolution(Profile::from_expression("2 + cos(t)"), {0, 2 * kPi}, 64, 32, true))) < 1e-3);
  }

  TEST_CASE("metric is positive definite everywhere") {
    for (const ChartPtr& c : {build_sphere_band(0.2, 2.9, 32, 64),
                              build_revolution(Profile::from_expression("1 + 0.3*cos(t)"), {0, 3}, 32, 32)}) {
      for (std::size_t p = 0; p < c->size(); ++p) {
        REQUIRE(c->g11()[p] > 0);
        REQUIRE(c->g11()[p] * c->g22()[p] - c->g12()[p] * c->g12()[p] > 0);
        REQUIRE(c->sqrt_det_g()[p] > 0);
      }
    }
  }
}
