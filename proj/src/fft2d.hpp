// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

// Internal: 2D real FFT on a doubly periodic grid (row-major nu x nv).

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace geohydro::detail {

class Fft2d {
 public:
  Fft2d(int nu, int nv, double lu, double lv);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int nu() const { return nu_; }
  int nv() const { return nv_; }
  int nvc() const { return nv_ / 2 + 1; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(nu_) * nvc(); }

  void forward(std::span<const double> in, std::vector<std::complex<double>>& out) const;
  /// Normalized inverse.
  void backward(std::span<const std::complex<double>> in, std::vector<double>& out) const;

  /// Wavenumbers of spectral row i / column j.
  double ku(int i) const;
  double kv(int j) const;
  /// First-derivative symbols (Nyquist zeroed).
  double du_symbol(int i) const { return 2 * i == nu_ ? 0.0 : ku(i); }
  double dv_symbol(int j) const { return 2 * j == nv_ ? 0.0 : kv(j); }
  /// Signed integer mode numbers.
  int mode_u(int i) const { return i <= nu_ / 2 ? i : i - nu_; }
  int mode_v(int j) const { return j; }

 private:
  int nu_, nv_;
  double lu_, lv_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace geohydro::detail
