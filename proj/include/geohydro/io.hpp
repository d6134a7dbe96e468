// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geohydro/field.hpp"

namespace geohydro {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// One row per grid node: u, v, value(s). Header line names the columns.
void write_field_csv(std::ostream& out, const ScalarField& f, const std::string& name = "value");
void write_field_csv(std::ostream& out, const VectorField& x);

/// Reads a u,v,value grid written by write_field_csv (rows in grid order).
/// Throws InvalidArgument when the shape or the node coordinates disagree with
/// the chart.
ScalarField read_field_csv(std::istream& in, const ChartPtr& chart);

/// Plain table with a header row.
void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Text dump of a chart: a '#'-prefixed description, then CSV blocks (metric,
/// curvature, Christoffel symbols, boundary data) each introduced by
/// "# block <name>".
void dump_chart(std::ostream& out, const SurfaceChart& chart);

}  // namespace geohydro
