// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace geohydro {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Uniform tensor-product sampling of a coordinate patch (u, v).
///
/// Samples are stored u-major: index(i, j) = i * nv + j. A periodic
/// coordinate omits the duplicated endpoint; a bounded one includes both ends.
struct ParameterGrid {
  int nu = 0;
  int nv = 0;
  bool u_periodic = true;
  bool v_periodic = true;
  Interval u_range;
  Interval v_range;

  /// Validates counts (even, >= 8) and ranges; throws InvalidArgument.
  static ParameterGrid make(int nu, int nv, bool u_periodic, bool v_periodic,
                            Interval u_range, Interval v_range);

  double du() const { return u_range.length() / (u_periodic ? nu : nu - 1); }
  double dv() const { return v_range.length() / (v_periodic ? nv : nv - 1); }
  double u(int i) const { return u_range.lo + i * du(); }
  double v(int j) const { return v_range.lo + j * dv(); }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }
  bool fully_periodic() const { return u_periodic && v_periodic; }

  bool operator==(const ParameterGrid&) const = default;
};

}  // namespace geohydro
