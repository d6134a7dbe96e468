// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geohydro/error.hpp"
#include "geohydro/expression.hpp"
#include "geohydro/poisson.hpp"

namespace geohydro {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int sym_index(int j, int k) { return j + k; }  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2

// Resolution test for numerically differentiated profiles: the 4th-order (or
// spectral) second derivative must agree with a 2nd-order estimate.
void check_profile_resolution(std::span<const double> rho, std::span<const double> d2_high,
                              double h, bool periodic, double length) {
  const int n = static_cast<int>(rho.size());
  double diff = 0.0;
  for (int i = 0; i < n; ++i) {
    double low;
    if (periodic) {
      low = (rho[(i + n - 1) % n] - 2 * rho[i] + rho[(i + 1) % n]) / (h * h);
    } else {
      if (i == 0 || i == n - 1) continue;
      low = (rho[i - 1] - 2 * rho[i] + rho[i + 1]) / (h * h);
    }
    diff = std::max(diff, std::abs(low - d2_high[i]));
  }
  double max_d2 = 0.0, max_rho = 0.0;
  for (int i = 0; i < n; ++i) {
    max_d2 = std::max(max_d2, std::abs(d2_high[i]));
    max_rho = std::max(max_rho, std::abs(rho[i]));
  }
  const double scale = max_d2 + max_rho / (length * length);
  if (diff > 0.05 * scale) {
    throw InvalidArgument("profile second derivative is not resolved on the grid");
  }
}

ChartPtr make_revolution_chart(ChartKind kind, const ParameterGrid& grid,
                               const std::vector<double>& rho, const std::vector<double>& drho,
                               const std::vector<double>& d2rho) {
  for (double r : rho) {
    if (!(r > 0.0)) throw InvalidArgument("surface-of-revolution profile must be positive");
  }
  ChartData d;
  d.grid = grid;
  d.kind = kind;
  const std::size_t n = grid.size();
  d.g11.assign(n, 1.0);
  d.g12.assign(n, 0.0);
  d.g22.assign(n, 0.0);
  d.curvature.assign(n, 0.0);
  for (auto& c : d.christoffel) c.assign(n, 0.0);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const std::size_t p = grid.index(i, j);
      d.g22[p] = rho[i] * rho[i];
      d.christoffel[0 * 3 + 2][p] = -rho[i] * drho[i];  // Gamma^t_{phi phi}
      d.christoffel[1 * 3 + 1][p] = drho[i] / rho[i];   // Gamma^phi_{t phi}
      d.curvature[p] = -d2rho[i] / rho[i];
    }
  }
  if (!grid.u_periodic) {
    for (Edge e : {Edge::UMin, Edge::UMax}) {
      BoundaryCurve b;
      b.which_edge = e;
      b.row = (e == Edge::UMin) ? 0 : grid.nu - 1;
      const double sign = (e == Edge::UMin) ? -1.0 : 1.0;
      b.kg.assign(grid.nv, sign * drho[b.row] / rho[b.row]);
      b.normal_u.assign(grid.nv, sign);
      b.normal_v.assign(grid.nv, 0.0);
      d.boundary.push_back(std::move(b));
    }
  }
  return std::make_shared<const SurfaceChart>(std::move(d));
}

ParameterGrid revolution_grid(Interval t_range, int nu, int nv, bool t_periodic) {
  return ParameterGrid::make(nu, nv, t_periodic, true, t_range, Interval{0.0, kTwoPi});
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::FlatTorus: return "flat_torus";
    case ChartKind::SphereBand: return "sphere_band";
    case ChartKind::Revolution: return "revolution";
  }
  return "unknown";
}

Profile Profile::from_expression(const std::string& text) {
  const Expression::Bindings b = {{"t", 0}, {"u", 0}};
  const Expression rho = Expression::parse(text, b);
  const Expression d1 = rho.derivative(0);
  const Expression d2 = d1.derivative(0);
  return Profile{[rho](double t) { return rho(t); }, [d1](double t) { return d1(t); },
                 [d2](double t) { return d2(t); }};
}

SurfaceChart::SurfaceChart(ChartData data)
    : data_(std::move(data)), ops_(data_.grid), interp_(data_.grid) {
  const std::size_t n = data_.grid.size();
  auto check = [n](const std::vector<double>& a, const char* name) {
    if (a.size() != n) throw InvalidArgument(std::string("chart array ") + name + " has wrong size");
  };
  check(data_.g11, "g11");
  check(data_.g12, "g12");
  check(data_.g22, "g22");
  check(data_.curvature, "curvature");
  for (const auto& c : data_.christoffel) check(c, "christoffel");
  ginv11_.resize(n);
  ginv12_.resize(n);
  ginv22_.resize(n);
  det_g_.resize(n);
  sqrt_det_g_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double det = data_.g11[p] * data_.g22[p] - data_.g12[p] * data_.g12[p];
    if (!(data_.g11[p] > 0.0) || !(det > 0.0)) {
      throw InvalidArgument("metric is not positive definite");
    }
    det_g_[p] = det;
    sqrt_det_g_[p] = std::sqrt(det);
    ginv11_[p] = data_.g22[p] / det;
    ginv12_[p] = -data_.g12[p] / det;
    ginv22_[p] = data_.g11[p] / det;
  }
  const auto& g = data_.grid;
  const auto wu = quadrature_weights_1d(g.nu, g.du(), g.u_periodic);
  const auto wv = quadrature_weights_1d(g.nv, g.dv(), g.v_periodic);
  weights_.resize(n);
  area_weights_.resize(n);
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(i, j);
      weights_[p] = wu[i] * wv[j];
      area_weights_[p] = weights_[p] * sqrt_det_g_[p];
    }
  }
  for (const auto& b : data_.boundary) {
    if (b.kg.size() != static_cast<std::size_t>(g.nv) || b.normal_u.size() != b.kg.size() ||
        b.normal_v.size() != b.kg.size()) {
      throw InvalidArgument("boundary curve arrays must have nv samples");
    }
  }
}

SurfaceChart::~SurfaceChart() = default;

const std::vector<double>& SurfaceChart::christoffel(int i, int j, int k) const {
  if (i < 0 || i > 1 || j < 0 || j > 1 || k < 0 || k > 1) {
    throw InvalidArgument("Christoffel index out of range");
  }
  return data_.christoffel[i * 3 + sym_index(j, k)];
}

double SurfaceChart::area() const {
  double a = 0.0;
  for (double w : area_weights_) a += w;
  return a;
}

const PoissonSolver& SurfaceChart::poisson() const {
  std::call_once(poisson_once_, [this] { poisson_ = std::make_unique<PoissonSolver>(*this); });
  return *poisson_;
}

ChartPtr build_flat_torus(double lx, double ly, int nu, int nv) {
  if (!(lx > 0) || !(ly > 0)) throw InvalidArgument("torus side lengths must be positive");
  ChartData d;
  d.grid = ParameterGrid::make(nu, nv, true, true, Interval{0.0, lx}, Interval{0.0, ly});
  d.kind = ChartKind::FlatTorus;
  const std::size_t n = d.grid.size();
  d.g11.assign(n, 1.0);
  d.g12.assign(n, 0.0);
  d.g22.assign(n, 1.0);
  d.curvature.assign(n, 0.0);
  for (auto& c : d.christoffel) c.assign(n, 0.0);
  return std::make_shared<const SurfaceChart>(std::move(d));
}

ChartPtr build_revolution(const Profile& profile, Interval t_range, int nu, int nv,
                          bool t_periodic) {
  if (!profile.rho) throw InvalidArgument("profile needs a rho function");
  const ParameterGrid grid = revolution_grid(t_range, nu, nv, t_periodic);
  std::vector<double> rho(nu), drho(nu), d2rho(nu);
  for (int i = 0; i < nu; ++i) {
    rho[i] = profile.rho(grid.u(i));
    if (!(rho[i] > 0.0)) throw InvalidArgument("surface-of-revolution profile must be positive");
  }
  const Axis axis(nu, grid.du(), t_periodic, 1);
  if (profile.drho) {
    for (int i = 0; i < nu; ++i) drho[i] = profile.drho(grid.u(i));
  } else {
    axis.apply(1, rho, drho);
  }
  if (profile.d2rho) {
    for (int i = 0; i < nu; ++i) d2rho[i] = profile.d2rho(grid.u(i));
  } else {
    axis.apply(2, rho, d2rho);
    check_profile_resolution(rho, d2rho, grid.du(), t_periodic, t_range.length());
  }
  return make_revolution_chart(ChartKind::Revolution, grid, rho, drho, d2rho);
}

ChartPtr build_revolution_from_samples(std::span<const double> rho, Interval t_range, int nv,
                                       bool t_periodic) {
  const int nu = static_cast<int>(rho.size());
  const ParameterGrid grid = revolution_grid(t_range, nu, nv, t_periodic);
  for (double r : rho) {
    if (!(r > 0.0)) throw InvalidArgument("surface-of-revolution profile must be positive");
  }
  std::vector<double> r(rho.begin(), rho.end()), d1(nu), d2(nu);
  const Axis axis(nu, grid.du(), t_periodic, 1);
  axis.apply(1, r, d1);
  axis.apply(2, r, d2);
  check_profile_resolution(r, d2, grid.du(), t_periodic, t_range.length());
  return make_revolution_chart(ChartKind::Revolution, grid, r, d1, d2);
}

ChartPtr build_sphere_band(double theta_min, double theta_max, int nu, int nv) {
  if (!(theta_min > 0.0) || !(theta_max < std::numbers::pi) || !(theta_min < theta_max)) {
    throw InvalidArgument("sphere band needs 0 < theta_min < theta_max < pi (poles excluded)");
  }
  const ParameterGrid grid = revolution_grid(Interval{theta_min, theta_max}, nu, nv, false);
  std::vector<double> rho(nu), drho(nu), d2rho(nu);
  for (int i = 0; i < nu; ++i) {
    const double t = grid.u(i);
    rho[i] = std::sin(t);
    drho[i] = std::cos(t);
    d2rho[i] = -std::sin(t);
  }
  return make_revolution_chart(ChartKind::SphereBand, grid, rho, drho, d2rho);
}

double gauss_bonnet_sum(const SurfaceChart& chart) {
  double total = 0.0;
  const auto& k = chart.curvature();
  const auto& w = chart.area_weights();
  for (std::size_t p = 0; p < chart.size(); ++p) total += k[p] * w[p];
  const auto& g = chart.grid();
  const auto wv = quadrature_weights_1d(g.nv, g.dv(), g.v_periodic);
  for (const auto& b : chart.boundary()) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(b.row, j);
      total += b.kg[j] * std::sqrt(chart.g22()[p]) * wv[j];
    }
  }
  return total;
}

}  // namespace geohydro
