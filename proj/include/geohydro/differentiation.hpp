// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geohydro/grid.hpp"

namespace geohydro {

/// FFTW's planner is not thread-safe; every plan creation and destruction
/// takes this lock. Executing existing plans on new arrays is safe.
std::mutex& fftw_planner_mutex();

/// Batched real FFT over `lines` contiguous lines of length n (FFTW backend).
/// Backward transforms are normalized so that backward(forward(f)) == f.
class LineFft {
 public:
  LineFft(int n, int lines);
  ~LineFft();
  LineFft(const LineFft&) = delete;
  LineFft& operator=(const LineFft&) = delete;

  int size() const { return n_; }
  int lines() const { return lines_; }
  int modes() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void backward(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  int n_;
  int lines_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// One coordinate direction's derivative operator.
///
/// Periodic axes differentiate spectrally; bounded axes use centered
/// differences of accuracy kFdAccuracy, with one-sided closures of the same
/// accuracy near the two ends.
class Axis {
 public:
  static constexpr int kFdAccuracy = 10;

  Axis(int n, double spacing, bool periodic, int lines);

  int size() const { return n_; }
  bool periodic() const { return periodic_; }
  double spacing() const { return h_; }

  /// Wavenumber of mode m (periodic axes).
  double wavenumber(int m) const;
  /// Symbol of the first-derivative operator as a real factor of i; zero at Nyquist.
  double first_derivative_symbol(int m) const;

  /// Differentiates `lines` contiguous lines; order is 1 or 2.
  void apply(int order, std::span<const double> in, std::span<double> out) const;

  /// Dense n x n matrix of the same operator (order 1 or 2).
  Eigen::MatrixXd matrix(int order) const;

  const LineFft* fft() const { return fft_.get(); }

 private:
  struct FdRow {
    int start = 0;
    std::vector<double> weights;
  };
  void build_fd();
  void apply_fd(int order, std::span<const double> in, std::span<double> out, int lines) const;

  int n_;
  double h_;
  bool periodic_;
  int lines_;
  std::unique_ptr<LineFft> fft_;
  std::array<std::vector<FdRow>, 2> fd_;
};

/// Partial derivatives of grid samples on a ParameterGrid.
class DerivativeOps {
 public:
  explicit DerivativeOps(const ParameterGrid& grid);

  std::vector<double> du(std::span<const double> f) const;
  std::vector<double> dv(std::span<const double> f) const;
  std::vector<double> duu(std::span<const double> f) const;
  std::vector<double> dvv(std::span<const double> f) const;
  std::vector<double> duv(std::span<const double> f) const;

  const Axis& u_axis() const { return u_axis_; }
  const Axis& v_axis() const { return v_axis_; }

 private:
  std::vector<double> along_u(int order, std::span<const double> f) const;
  std::vector<double> along_v(int order, std::span<const double> f) const;

  ParameterGrid grid_;
  Axis u_axis_;
  Axis v_axis_;
};

/// 1D quadrature weights: trapezoid on periodic axes, Gregory
/// end corrections (up to eight points per end) on bounded axes.
std::vector<double> quadrature_weights_1d(int n, double spacing, bool periodic);

}  // namespace geohydro
