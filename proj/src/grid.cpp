// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/grid.hpp"

#include <string>

#include "geohydro/error.hpp"

namespace geohydro {

ParameterGrid ParameterGrid::make(int nu, int nv, bool u_periodic, bool v_periodic,
                                  Interval u_range, Interval v_range) {
  auto check = [](int n, const char* name) {
    if (n < 8 || n % 2 != 0) {
      throw InvalidArgument(std::string("grid count ") + name + " = " + std::to_string(n) +
                            " must be even and at least 8");
    }
  };
  check(nu, "nu");
  check(nv, "nv");
  if (!(u_range.length() > 0) || !(v_range.length() > 0)) {
    throw InvalidArgument("grid ranges must have positive length");
  }
  ParameterGrid g;
  g.nu = nu;
  g.nv = nv;
  g.u_periodic = u_periodic;
  g.v_periodic = v_periodic;
  g.u_range = u_range;
  g.v_range = v_range;
  return g;
}

}  // namespace geohydro
