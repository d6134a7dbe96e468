// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/poisson.hpp"

#include <cmath>

#include "geohydro/error.hpp"

namespace geohydro {

struct PoissonSolver::ModeSolver {
  bool singular = false;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return singular ? Eigen::VectorXd(cod.solve(b)) : Eigen::VectorXd(lu.solve(b));
  }
};

PoissonSolver::PoissonSolver(const SurfaceChart& chart) : chart_(chart) {
  const auto& g = chart.grid();
  if (!g.v_periodic) throw InvalidArgument("Poisson solver needs a periodic v coordinate");
  std::vector<double> rho(g.nu);
  for (int i = 0; i < g.nu; ++i) {
    rho[i] = std::sqrt(chart.g22()[g.index(i, 0)]);
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(i, j);
      if (std::abs(chart.g11()[p] - 1.0) > 1e-14 || chart.g12()[p] != 0.0 ||
          std::abs(std::sqrt(chart.g22()[p]) - rho[i]) > 1e-14 * rho[i]) {
        throw InvalidArgument("Poisson solver needs a metric du^2 + rho(u)^2 dv^2");
      }
    }
  }
  const Eigen::MatrixXd d1 = chart.ops().u_axis().matrix(1);
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rho.data(), g.nu);
  const Eigen::MatrixXd radial =
      r.cwiseInverse().asDiagonal() * d1 * r.asDiagonal() * d1;
  const Axis& v_axis = chart.ops().v_axis();
  const int n_modes = g.nv / 2 + 1;
  for (int m = 0; m < n_modes; ++m) {
    const double s = v_axis.first_derivative_symbol(m);
    Eigen::MatrixXd a = radial;
    for (int i = 0; i < g.nu; ++i) a(i, i) -= s * s / (rho[i] * rho[i]);
    if (!g.u_periodic) {
      a.row(0) = d1.row(0);
      a.row(g.nu - 1) = d1.row(g.nu - 1);
    }
    auto mode = std::make_unique<ModeSolver>();
    mode->singular = (s == 0.0);
    if (mode->singular) {
      mode->cod.compute(a);
    } else {
      mode->lu.compute(a);
    }
    modes_.push_back(std::move(mode));
  }
  if (!g.u_periodic) edge_fft_ = std::make_unique<LineFft>(g.nv, 1);
}

PoissonSolver::~PoissonSolver() = default;

std::vector<double> PoissonSolver::solve_modes(std::vector<std::complex<double>> spec) const {
  const auto& g = chart_.grid();
  const int n_modes = g.nv / 2 + 1;
  Eigen::VectorXd re(g.nu), im(g.nu);
  for (int m = 0; m < n_modes; ++m) {
    for (int i = 0; i < g.nu; ++i) {
      const auto c = spec[static_cast<std::size_t>(i) * n_modes + m];
      re[i] = c.real();
      im[i] = c.imag();
    }
    const Eigen::VectorXd xr = modes_[m]->solve(re);
    const Eigen::VectorXd xi = modes_[m]->solve(im);
    for (int i = 0; i < g.nu; ++i) {
      spec[static_cast<std::size_t>(i) * n_modes + m] = {xr[i], xi[i]};
    }
  }
  std::vector<double> p(g.size());
  chart_.ops().v_axis().fft()->backward(spec, p);
  remove_mean(p);
  return p;
}

void PoissonSolver::remove_mean(std::vector<double>& p) const {
  const auto& w = chart_.area_weights();
  double mean = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) mean += p[k] * w[k];
  mean /= chart_.area();
  for (double& x : p) x -= mean;
}

std::vector<double> PoissonSolver::solve(std::span<const double> source) const {
  const auto& g = chart_.grid();
  if (!g.u_periodic) {
    throw InvalidArgument("closed-chart Poisson solve requested on a chart with boundary");
  }
  if (source.size() != g.size()) throw InvalidArgument("Poisson source has wrong size");
  const auto& w = chart_.area_weights();
  double mean = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < source.size(); ++p) {
    mean += source[p] * w[p];
    scale += std::abs(source[p]) * w[p];
  }
  if (std::abs(mean) > 1e-8 * scale + 1e-13 * chart_.area()) {
    throw InconsistentInput("Poisson source has nonzero mean on a closed chart");
  }
  const int n_modes = g.nv / 2 + 1;
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(g.nu) * n_modes);
  chart_.ops().v_axis().fft()->forward(source, spec);
  return solve_modes(std::move(spec));
}

std::vector<double> PoissonSolver::solve_neumann(std::span<const double> source,
                                                 std::span<const double> du_at_min,
                                                 std::span<const double> du_at_max) const {
  const auto& g = chart_.grid();
  if (g.u_periodic) throw InvalidArgument("Neumann Poisson solve needs a bounded chart");
  if (source.size() != g.size() || du_at_min.size() != static_cast<std::size_t>(g.nv) ||
      du_at_max.size() != static_cast<std::size_t>(g.nv)) {
    throw InvalidArgument("Neumann Poisson data has wrong size");
  }
  // Compatibility: integral of the source equals the outward boundary flux.
  const auto& w = chart_.area_weights();
  double interior = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < source.size(); ++p) {
    interior += source[p] * w[p];
    scale += std::abs(source[p]) * w[p];
  }
  const auto wv = quadrature_weights_1d(g.nv, g.dv(), true);
  double flux = 0.0;
  for (int j = 0; j < g.nv; ++j) {
    const double rho_min = chart_.sqrt_det_g()[g.index(0, j)];
    const double rho_max = chart_.sqrt_det_g()[g.index(g.nu - 1, j)];
    flux += (du_at_max[j] * rho_max - du_at_min[j] * rho_min) * wv[j];
    scale += (std::abs(du_at_max[j]) * rho_max + std::abs(du_at_min[j]) * rho_min) * wv[j];
  }
  if (std::abs(interior - flux) > 1e-3 * scale + 1e-13 * chart_.area()) {
    throw InconsistentInput("Neumann data incompatible with the Poisson source");
  }
  const int n_modes = g.nv / 2 + 1;
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(g.nu) * n_modes);
  chart_.ops().v_axis().fft()->forward(source, spec);
  std::vector<std::complex<double>> edge(n_modes);
  edge_fft_->forward(du_at_min, edge);
  for (int m = 0; m < n_modes; ++m) spec[m] = edge[m];
  edge_fft_->forward(du_at_max, edge);
  for (int m = 0; m < n_modes; ++m) {
    spec[static_cast<std::size_t>(g.nu - 1) * n_modes + m] = edge[m];
  }
  return solve_modes(std::move(spec));
}

}  // namespace geohydro
