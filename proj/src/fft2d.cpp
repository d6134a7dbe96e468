// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fft2d.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <numbers>

#include "geohydro/differentiation.hpp"
#include "geohydro/error.hpp"

namespace geohydro::detail {

Fft2d::Fft2d(int nu, int nv, double lu, double lv) : nu_(nu), nv_(nv), lu_(lu), lv_(lv) {
  double* r = fftw_alloc_real(static_cast<std::size_t>(nu) * nv);
  fftw_complex* c = fftw_alloc_complex(spectral_size());
  {
    std::lock_guard lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_r2c_2d(nu, nv, r, c, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(nu, nv, c, r, FFTW_ESTIMATE);
  }
  fftw_free(r);
  fftw_free(c);
  if (!fwd_ || !bwd_) throw Error("FFTW planning failed");
}

Fft2d::~Fft2d() {
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft2d::forward(std::span<const double> in, std::vector<std::complex<double>>& out) const {
  const std::size_t n = static_cast<std::size_t>(nu_) * nv_;
  if (in.size() != n) throw InvalidArgument("Fft2d::forward size mismatch");
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(spectral_size());
  std::memcpy(r, in.data(), n * sizeof(double));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), r, c);
  out.resize(spectral_size());
  std::memcpy(static_cast<void*>(out.data()), c, spectral_size() * sizeof(fftw_complex));
  fftw_free(r);
  fftw_free(c);
}

void Fft2d::backward(std::span<const std::complex<double>> in, std::vector<double>& out) const {
  const std::size_t n = static_cast<std::size_t>(nu_) * nv_;
  if (in.size() != spectral_size()) throw InvalidArgument("Fft2d::backward size mismatch");
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(spectral_size());
  std::memcpy(c, static_cast<const void*>(in.data()), spectral_size() * sizeof(fftw_complex));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), c, r);
  out.resize(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = r[k] * scale;
  fftw_free(r);
  fftw_free(c);
}

double Fft2d::ku(int i) const { return 2.0 * std::numbers::pi * mode_u(i) / lu_; }
double Fft2d::kv(int j) const { return 2.0 * std::numbers::pi * mode_v(j) / lv_; }

}  // namespace geohydro::detail
