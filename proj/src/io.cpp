// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "geohydro/error.hpp"
#include "geohydro/surface.hpp"

namespace geohydro {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void write_rows(std::ostream& out, const ChartPtr& chart,
                const std::vector<const std::vector<double>*>& cols) {
  const auto& g = chart->grid();
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(i, j);
      out << format_double(g.u(i)) << ',' << format_double(g.v(j));
      for (const auto* c : cols) out << ',' << format_double((*c)[p]);
      out << '\n';
    }
  }
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw InvalidArgument("empty CSV cell");
    double x = 0.0;
    const auto res = std::from_chars(cell.data() + b, cell.data() + e + 1, x);
    if (res.ec != std::errc() || res.ptr != cell.data() + e + 1) {
      throw InvalidArgument("not a number in CSV: '" + cell + "'");
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

void write_field_csv(std::ostream& out, const ScalarField& f, const std::string& name) {
  out << "u,v," << name << '\n';
  write_rows(out, f.chart(), {&f.samples()});
}

void write_field_csv(std::ostream& out, const VectorField& x) {
  out << "u,v,x1,x2\n";
  write_rows(out, x.chart(), {&x.x1(), &x.x2()});
}

ScalarField read_field_csv(std::istream& in, const ChartPtr& chart) {
  if (!chart) throw InvalidArgument("read_field_csv needs a chart");
  const auto& g = chart->grid();
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
  ScalarField f(chart);
  std::size_t p = 0;
  const double tol = 1e-9 * (1.0 + std::max(std::abs(g.u_range.hi), std::abs(g.v_range.hi)));
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto row = split_numbers(line);
    if (row.size() != 3) throw InvalidArgument("CSV row needs u,v,value: '" + line + "'");
    if (p >= f.size()) throw InvalidArgument("CSV has more rows than grid nodes");
    const int i = static_cast<int>(p / g.nv), j = static_cast<int>(p % g.nv);
    if (std::abs(row[0] - g.u(i)) > tol || std::abs(row[1] - g.v(j)) > tol) {
      throw InvalidArgument("CSV node " + std::to_string(p) + " does not match the chart grid");
    }
    f[p++] = row[2];
  }
  if (p != f.size()) {
    throw InvalidArgument("CSV has " + std::to_string(p) + " rows, grid has " +
                          std::to_string(f.size()));
  }
  return f;
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  for (const auto& r : rows)
    if (r.size() != header.size()) throw InvalidArgument("table row width does not match the header");
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_double(r[k]);
    out << '\n';
  }
}

void dump_chart(std::ostream& out, const SurfaceChart& c) {
  const auto& g = c.grid();
  ChartPtr holder(&c, [](const SurfaceChart*) {});
  out << "# kind " << to_string(c.kind()) << '\n'
      << "# nu " << g.nu << " nv " << g.nv << '\n'
      << "# u_range " << format_double(g.u_range.lo) << ' ' << format_double(g.u_range.hi)
      << (g.u_periodic ? " periodic" : " bounded") << '\n'
      << "# v_range " << format_double(g.v_range.lo) << ' ' << format_double(g.v_range.hi)
      << (g.v_periodic ? " periodic" : " bounded") << '\n'
      << "# area " << format_double(c.area()) << '\n';
  out << "# block metric\nu,v,g11,g12,g22,sqrt_det_g,curvature\n";
  write_rows(out, holder, {&c.g11(), &c.g12(), &c.g22(), &c.sqrt_det_g(), &c.curvature()});
  out << "# block christoffel\nu,v,G1_11,G1_12,G1_22,G2_11,G2_12,G2_22\n";
  write_rows(out, holder,
             {&c.christoffel(0, 0, 0), &c.christoffel(0, 0, 1), &c.christoffel(0, 1, 1),
              &c.christoffel(1, 0, 0), &c.christoffel(1, 0, 1), &c.christoffel(1, 1, 1)});
  for (const auto& b : c.boundary()) {
    out << "# block boundary " << (b.which_edge == Edge::UMin ? "umin" : "umax") << '\n'
        << "u,v,kg,normal_u,normal_v\n";
    for (int j = 0; j < g.nv; ++j) {
      out << format_double(g.u(b.row)) << ',' << format_double(g.v(j)) << ','
          << format_double(b.kg[j]) << ',' << format_double(b.normal_u[j]) << ','
          << format_double(b.normal_v[j]) << '\n';
    }
  }
}

}  // namespace geohydro
