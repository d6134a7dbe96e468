// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace geohydro {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: bad grid counts, mismatched charts, unparsable expressions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Poisson-type problem with incompatible data (e.g. nonzero mean source on a closed chart).
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

/// Burgers particle trajectories crossed: the map Jacobian reached zero.
class CausticError : public Error {
 public:
  CausticError(const std::string& what, double crossing_time)
      : Error(what), crossing_time_(crossing_time) {}
  double crossing_time() const { return crossing_time_; }

 private:
  double crossing_time_;
};

/// Iterative solver failed (iteration cap, damping exhausted, CFL violation).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Short scientific rendering for error messages.
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace geohydro
