// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/differentiation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "geohydro/error.hpp"

namespace geohydro {

namespace {

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t count)
      : data(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

// Fornberg's recursion: weights of the derivatives 0..order at x0 for the
// nodes x. Returns the row for `order`.
std::vector<double> fornberg(double x0, const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

}  // namespace

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

LineFft::LineFft(int n, int lines) : n_(n), lines_(lines) {
  FftwBuffer<double> real(static_cast<std::size_t>(n) * lines);
  FftwBuffer<fftw_complex> cplx(static_cast<std::size_t>(modes()) * lines);
  std::lock_guard lock(fftw_planner_mutex());
  int dims[1] = {n};
  forward_plan_ = fftw_plan_many_dft_r2c(1, dims, lines, real.data, nullptr, 1, n, cplx.data,
                                         nullptr, 1, modes(), FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_many_dft_c2r(1, dims, lines, cplx.data, nullptr, 1, modes(),
                                          real.data, nullptr, 1, n, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) throw Error("FFTW planning failed");
}

LineFft::~LineFft() {
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void LineFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  const std::size_t nr = static_cast<std::size_t>(n_) * lines_;
  const std::size_t nc = static_cast<std::size_t>(modes()) * lines_;
  if (in.size() != nr || out.size() != nc) throw InvalidArgument("LineFft::forward size mismatch");
  FftwBuffer<double> real(nr);
  FftwBuffer<fftw_complex> cplx(nc);
  std::memcpy(real.data, in.data(), nr * sizeof(double));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.data, cplx.data);
  std::memcpy(static_cast<void*>(out.data()), cplx.data, nc * sizeof(fftw_complex));
}

void LineFft::backward(std::span<const std::complex<double>> in, std::span<double> out) const {
  const std::size_t nr = static_cast<std::size_t>(n_) * lines_;
  const std::size_t nc = static_cast<std::size_t>(modes()) * lines_;
  if (out.size() != nr || in.size() != nc) throw InvalidArgument("LineFft::backward size mismatch");
  FftwBuffer<double> real(nr);
  FftwBuffer<fftw_complex> cplx(nc);
  std::memcpy(cplx.data, in.data(), nc * sizeof(fftw_complex));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_plan_), cplx.data, real.data);
  const double scale = 1.0 / n_;
  for (std::size_t k = 0; k < nr; ++k) out[k] = real.data[k] * scale;
}

Axis::Axis(int n, double spacing, bool periodic, int lines)
    : n_(n), h_(spacing), periodic_(periodic), lines_(lines) {
  if (n < 8) throw InvalidArgument("axis needs at least 8 samples");
  if (periodic) {
    fft_ = std::make_unique<LineFft>(n, lines);
  } else {
    build_fd();
  }
}

double Axis::wavenumber(int m) const {
  const double length = n_ * h_;
  return 2.0 * std::numbers::pi * m / length;
}

double Axis::first_derivative_symbol(int m) const {
  return (2 * m == n_) ? 0.0 : wavenumber(m);
}

void Axis::apply(int order, std::span<const double> in, std::span<double> out) const {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  const std::size_t total = static_cast<std::size_t>(n_) * lines_;
  if (in.size() != total || out.size() != total) throw InvalidArgument("Axis::apply size mismatch");
  if (!periodic_) {
    apply_fd(order, in, out, lines_);
    return;
  }
  const int modes = fft_->modes();
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(modes) * lines_);
  fft_->forward(in, spec);
  for (int l = 0; l < lines_; ++l) {
    for (int m = 0; m < modes; ++m) {
      auto& c = spec[static_cast<std::size_t>(l) * modes + m];
      if (order == 1) {
        c *= std::complex<double>(0.0, first_derivative_symbol(m));
      } else {
        const double k = wavenumber(m);
        c *= -k * k;
      }
    }
  }
  fft_->backward(spec, out);
}

void Axis::build_fd() {
  // Short axes drop to the highest even accuracy whose closures still fit.
  const int p = std::min(kFdAccuracy, (n_ - 2) & ~1);
  for (int d = 1; d <= 2; ++d) {
    auto& rows = fd_[d - 1];
    rows.resize(n_);
    const double scale = std::pow(h_, -d);
    for (int i = 0; i < n_; ++i) {
      int width = p + 1;
      int start = i - p / 2;
      if (start < 0 || start + width > n_) {
        if (d == 2) width = p + 2;
        start = std::clamp(i - width / 2, 0, n_ - width);
      }
      std::vector<double> x(width);
      for (int k = 0; k < width; ++k) x[k] = start + k;
      rows[i].start = start;
      rows[i].weights = fornberg(static_cast<double>(i), x, d);
      for (double& w : rows[i].weights) w *= scale;
    }
  }
}

void Axis::apply_fd(int order, std::span<const double> in, std::span<double> out,
                    int lines) const {
  const auto& rows = fd_[order - 1];
  for (int l = 0; l < lines; ++l) {
    const double* f = in.data() + static_cast<std::size_t>(l) * n_;
    double* d = out.data() + static_cast<std::size_t>(l) * n_;
    for (int i = 0; i < n_; ++i) {
      const auto& r = rows[i];
      double acc = 0.0;
      for (std::size_t k = 0; k < r.weights.size(); ++k) acc += r.weights[k] * f[r.start + k];
      d[i] = acc;
    }
  }
}

Eigen::MatrixXd Axis::matrix(int order) const {
  Eigen::MatrixXd m(n_, n_);
  if (periodic_) {
    const Axis single(n_, h_, true, 1);
    std::vector<double> e(n_), col(n_);
    for (int j = 0; j < n_; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      single.apply(order, e, col);
      for (int i = 0; i < n_; ++i) m(i, j) = col[i];
    }
    return m;
  }
  std::vector<double> e(n_), col(n_);
  for (int j = 0; j < n_; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    apply_fd(order, e, col, 1);
    for (int i = 0; i < n_; ++i) m(i, j) = col[i];
  }
  return m;
}

DerivativeOps::DerivativeOps(const ParameterGrid& grid)
    : grid_(grid),
      u_axis_(grid.nu, grid.du(), grid.u_periodic, grid.nv),
      v_axis_(grid.nv, grid.dv(), grid.v_periodic, grid.nu) {}

std::vector<double> DerivativeOps::along_v(int order, std::span<const double> f) const {
  if (f.size() != grid_.size()) throw InvalidArgument("field size does not match grid");
  std::vector<double> out(f.size());
  v_axis_.apply(order, f, out);
  return out;
}

std::vector<double> DerivativeOps::along_u(int order, std::span<const double> f) const {
  if (f.size() != grid_.size()) throw InvalidArgument("field size does not match grid");
  const int nu = grid_.nu, nv = grid_.nv;
  std::vector<double> t(f.size()), dt(f.size()), out(f.size());
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) t[static_cast<std::size_t>(j) * nu + i] = f[grid_.index(i, j)];
  u_axis_.apply(order, t, dt);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) out[grid_.index(i, j)] = dt[static_cast<std::size_t>(j) * nu + i];
  return out;
}

std::vector<double> DerivativeOps::du(std::span<const double> f) const { return along_u(1, f); }
std::vector<double> DerivativeOps::dv(std::span<const double> f) const { return along_v(1, f); }
std::vector<double> DerivativeOps::duu(std::span<const double> f) const { return along_u(2, f); }
std::vector<double> DerivativeOps::dvv(std::span<const double> f) const { return along_v(2, f); }
std::vector<double> DerivativeOps::duv(std::span<const double> f) const {
  return along_v(1, along_u(1, f));
}

std::vector<double> quadrature_weights_1d(int n, double spacing, bool periodic) {
  std::vector<double> w(n, spacing);
  if (periodic) return w;
  if (n < 8) throw InvalidArgument("bounded quadrature needs at least 8 samples");
  // Gregory end corrections: the trapezoid rule plus m end weights that cancel
  // the Euler-Maclaurin terms through f^(m-1).
  const int m = std::min(8, n / 2);
  constexpr double kRhs[8] = {0.0, 1.0 / 12, 0.0, -1.0 / 120, 0.0, 1.0 / 252, 0.0, -1.0 / 240};
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd rhs(m);
  for (int q = 0; q < m; ++q) {
    for (int k = 0; k < m; ++k) v(q, k) = std::pow(static_cast<double>(k), q);
    rhs(q) = kRhs[q];
  }
  v(0, 0) = 1.0;  // 0^0
  const Eigen::VectorXd c = v.fullPivLu().solve(rhs);
  for (int k = 0; k < m; ++k) {
    const double base = (k == 0) ? 0.5 : 1.0;
    w[k] = (base + c(k)) * spacing;
    w[n - 1 - k] = (base + c(k)) * spacing;
  }
  return w;
}

}  // namespace geohydro
