// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "fft2d.hpp"
#include "geohydro/error.hpp"

namespace geohydro {

namespace {

using cplx = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_divergence_free(const VectorField& x, double tol, const char* who) {
  const double d = sup_norm(div(x));
  const double scale = std::max(1.0, sup_norm(x));
  if (!(d <= tol * scale)) {
    throw PreconditionError(std::string(who) + " needs a divergence-free field: sup |div X| = " +
                            sci(d));
  }
}

void require_flat_torus(const SurfaceChart& c, const char* who) {
  if (!c.is_flat()) throw PreconditionError(std::string(who) + " is only supported on the flat torus");
}

std::vector<double> displacement_u(const MapSamples& m) {
  const auto& g = m.chart->grid();
  std::vector<double> d(m.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) d[g.index(i, j)] = m.u[g.index(i, j)] - g.u(i);
  return d;
}

std::vector<double> displacement_v(const MapSamples& m) {
  const auto& g = m.chart->grid();
  std::vector<double> d(m.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) d[g.index(i, j)] = m.v[g.index(i, j)] - g.v(j);
  return d;
}

double min_of(const ScalarField& f) {
  double m = kInf;
  for (double s : f.samples()) m = std::min(m, s);
  return m;
}

// Record schedule: sorted positive times <= t_final, always ending at t_final.
std::vector<double> schedule(const FlowOptions& o, double t_final, int steps) {
  std::vector<double> out;
  if (o.save_times.empty()) {
    for (int k = 1; k <= steps; ++k) out.push_back(t_final * k / steps);
  } else {
    for (double t : o.save_times) {
      if (!(t > 0.0) || t > t_final * (1 + 1e-12)) {
        throw InvalidArgument("save times must lie in (0, t_final]");
      }
      out.push_back(std::min(t, t_final));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty() || out.back() < t_final) out.push_back(t_final);
  }
  return out;
}

double cfl_number(const SurfaceChart& c, std::span<const double> x1, std::span<const double> x2,
                  double dt) {
  const auto& g = c.grid();
  double m = 0.0;
  for (std::size_t p = 0; p < x1.size(); ++p) {
    m = std::max(m, std::abs(x1[p]) / g.du() + std::abs(x2[p]) / g.dv());
  }
  return dt * m;
}

int steps_from_cfl(const SurfaceChart& c, const VectorField& x, double t_final) {
  const double rate = cfl_number(c, x.x1(), x.x2(), 1.0);
  if (!(rate > 0.0) || t_final == 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(t_final * rate / 0.5)));
}

}  // namespace

MapSamples MapSamples::identity(const ChartPtr& chart) {
  MapSamples m;
  m.chart = chart;
  const auto& g = chart->grid();
  m.u.resize(g.size());
  m.v.resize(g.size());
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      m.u[g.index(i, j)] = g.u(i);
      m.v[g.index(i, j)] = g.v(j);
    }
  }
  return m;
}

ScalarField jacobian_determinant(const MapSamples& eta) {
  const auto& c = *eta.chart;
  const auto du = displacement_u(eta), dv = displacement_v(eta);
  const auto a = c.ops().du(du), b = c.ops().dv(du);
  const auto e = c.ops().du(dv), f = c.ops().dv(dv);
  ScalarField out(eta.chart);
  for (std::size_t p = 0; p < c.size(); ++p) out[p] = (1 + a[p]) * (1 + f[p]) - b[p] * e[p];
  return out;
}

double map_distance(const MapSamples& a, const MapSamples& b) {
  require_same_chart(a.chart, b.chart);
  const auto& c = *a.chart;
  double s = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const double x = a.u[p] - b.u[p], y = a.v[p] - b.v[p];
    s += c.area_weights()[p] * (c.g11()[p] * x * x + 2 * c.g12()[p] * x * y + c.g22()[p] * y * y);
  }
  return std::sqrt(s);
}

std::vector<double> compose(const ScalarField& f, const MapSamples& eta) {
  require_same_chart(f.chart(), eta.chart);
  const auto& in = f.chart()->interpolator();
  std::vector<double> out(eta.size());
  for (std::size_t p = 0; p < eta.size(); ++p) out[p] = in(f.samples(), eta.u[p], eta.v[p]);
  return out;
}

MapSamples invert_map(const MapSamples& eta) {
  const auto& c = *eta.chart;
  const auto& g = c.grid();
  if (!g.fully_periodic()) throw PreconditionError("map inversion needs a fully periodic chart");
  const auto du = displacement_u(eta), dv = displacement_v(eta);
  const auto duu = c.ops().du(du), duv = c.ops().dv(du);
  const auto dvu = c.ops().du(dv), dvv = c.ops().dv(dv);
  const auto& in = c.interpolator();
  MapSamples out = MapSamples::identity(eta.chart);
  const double scale = std::max(g.u_range.length(), g.v_range.length());
  for (std::size_t p = 0; p < c.size(); ++p) {
    const double yu = out.u[p], yv = out.v[p];
    double xu = yu - du[p], xv = yv - dv[p];
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const auto s = in.many<6>({std::span<const double>(du), std::span<const double>(dv),
                                 std::span<const double>(duu), std::span<const double>(duv),
                                 std::span<const double>(dvu), std::span<const double>(dvv)},
                                xu, xv);
      const double ru = xu + s[0] - yu, rv = xv + s[1] - yv;
      if (std::abs(ru) + std::abs(rv) < 1e-14 * scale) {
        ok = true;
        break;
      }
      const double a = 1 + s[2], b = s[3], e = s[4], f = 1 + s[5];
      const double det = a * f - b * e;
      if (!(det > 0.0)) break;
      xu -= (f * ru - b * rv) / det;
      xv -= (-e * ru + a * rv) / det;
    }
    if (!ok) throw SolverError("map inversion did not converge (folded map?)");
    out.u[p] = xu;
    out.v[p] = xv;
  }
  return out;
}

double burgers_caustic_time(const VectorField& x0) {
  const auto& c = *x0.chart();
  require_flat_torus(c, "burgers_caustic_time");
  const auto a = c.ops().du(x0.x1()), b = c.ops().dv(x0.x1());
  const auto e = c.ops().du(x0.x2()), f = c.ops().dv(x0.x2());
  double tc = kInf;
  for (std::size_t p = 0; p < c.size(); ++p) {
    // det(I + tA) = 1 + t tr A + t^2 det A
    const double tr = a[p] + f[p], det = a[p] * f[p] - b[p] * e[p];
    const double scale = std::abs(tr) + std::sqrt(std::abs(det));
    if (std::abs(det) <= 1e-14 * scale * scale) {
      if (tr < 0) tc = std::min(tc, -1.0 / tr);
      continue;
    }
    const double disc = tr * tr - 4 * det;
    if (disc < 0) continue;
    const double sq = std::sqrt(disc);
    // Roots of det t^2 + tr t + 1 via the stable form.
    const double q = -0.5 * (tr + std::copysign(sq, tr));
    for (double t : {q / det, 1.0 / q}) {
      if (std::isfinite(t) && t > 0) tc = std::min(tc, t);
    }
  }
  return tc;
}

DiffeoPath burgers_flow(const VectorField& x0, double t_final, int steps, const FlowOptions& o) {
  const ChartPtr& chart = x0.chart();
  const auto& c = *chart;
  const auto& g = c.grid();
  if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be nonnegative");
  if (steps < 0) throw InvalidArgument("steps must be nonnegative");
  if (o.spatial_velocity && !g.fully_periodic()) {
    throw PreconditionError("spatial velocities need a fully periodic chart");
  }
  if (steps == 0) steps = steps_from_cfl(c, x0, t_final);
  const std::vector<double> record = t_final > 0 ? schedule(o, t_final, steps) : std::vector<double>{};

  DiffeoPath path;
  path.chart = chart;
  const MapSamples id = MapSamples::identity(chart);
  MapSamples vel0;
  vel0.chart = chart;
  vel0.u = x0.x1();
  vel0.v = x0.x2();

  auto push = [&](double t, MapSamples map, MapSamples vel) {
    path.times.push_back(t);
    if (o.spatial_velocity) {
      const MapSamples inv = invert_map(map);
      VectorField v(chart);
      const auto& in = c.interpolator();
      for (std::size_t p = 0; p < c.size(); ++p) {
        const auto s = in.many<2>({std::span<const double>(vel.u), std::span<const double>(vel.v)},
                                  inv.u[p], inv.v[p]);
        v.x1()[p] = s[0];
        v.x2()[p] = s[1];
      }
      path.velocities.push_back(std::move(v));
    }
    path.maps.push_back(std::move(map));
    path.material_velocities.push_back(std::move(vel));
  };
  push(0.0, id, vel0);

  if (c.is_flat()) {
    const double tc = burgers_caustic_time(x0);
    if (tc <= t_final) throw CausticError("Burgers particles cross (det D eta = 0)", tc);
    for (double t : record) {
      MapSamples m = id;
      for (std::size_t p = 0; p < c.size(); ++p) {
        m.u[p] += t * x0.x1()[p];
        m.v[p] += t * x0.x2()[p];
      }
      push(t, std::move(m), vel0);
    }
    path.steps_taken = steps;
    return path;
  }

  // Geodesic ODE u'' = -Gamma(u', u') per particle, RK4.
  std::array<std::span<const double>, 6> gam;
  for (int i = 0; i < 2; ++i) {
    gam[i * 3 + 0] = c.christoffel(i, 0, 0);
    gam[i * 3 + 1] = c.christoffel(i, 0, 1);
    gam[i * 3 + 2] = c.christoffel(i, 1, 1);
  }
  const auto& in = c.interpolator();
  const std::size_t n = c.size();
  std::vector<double> pu = id.u, pv = id.v, qu = x0.x1(), qv = x0.x2();
  auto inside = [&](double u) {
    return g.u_periodic || (u >= g.u_range.lo - 1e-12 && u <= g.u_range.hi + 1e-12);
  };
  auto accel = [&](double u, double v, double a, double b, double& au, double& av) {
    const auto s = in.many<6>(gam, u, v);
    au = -(s[0] * a * a + 2 * s[1] * a * b + s[2] * b * b);
    av = -(s[3] * a * a + 2 * s[4] * a * b + s[5] * b * b);
  };
  const double dt_nominal = t_final / steps;
  double t = 0.0, prev_min_det = 1.0;
  int taken = 0;
  for (double t_next : record) {
    const int sub = std::max(1, static_cast<int>(std::ceil((t_next - t) / dt_nominal - 1e-9)));
    const double dt = (t_next - t) / sub;
    for (int s = 0; s < sub; ++s) {
      for (std::size_t p = 0; p < n; ++p) {
        double k[4][4];
        double u = pu[p], v = pv[p], a = qu[p], b = qv[p];
        const double w[4] = {0.0, 0.5, 0.5, 1.0};
        for (int st = 0; st < 4; ++st) {
          const double us = u + (st ? w[st] * dt * k[st - 1][0] : 0.0);
          const double vs = v + (st ? w[st] * dt * k[st - 1][1] : 0.0);
          const double as = a + (st ? w[st] * dt * k[st - 1][2] : 0.0);
          const double bs = b + (st ? w[st] * dt * k[st - 1][3] : 0.0);
          if (!inside(us)) {
            throw PreconditionError("a Burgers particle left the chart at t = " +
                                    std::to_string(t + s * dt));
          }
          k[st][0] = as;
          k[st][1] = bs;
          accel(us, vs, as, bs, k[st][2], k[st][3]);
        }
        pu[p] = u + dt / 6 * (k[0][0] + 2 * k[1][0] + 2 * k[2][0] + k[3][0]);
        pv[p] = v + dt / 6 * (k[0][1] + 2 * k[1][1] + 2 * k[2][1] + k[3][1]);
        qu[p] = a + dt / 6 * (k[0][2] + 2 * k[1][2] + 2 * k[2][2] + k[3][2]);
        qv[p] = b + dt / 6 * (k[0][3] + 2 * k[1][3] + 2 * k[2][3] + k[3][3]);
        if (!inside(pu[p])) {
          throw PreconditionError("a Burgers particle left the chart at t = " +
                                  std::to_string(t + (s + 1) * dt));
        }
      }
      ++taken;
      MapSamples m{chart, pu, pv};
      const double md = min_of(jacobian_determinant(m));
      if (md <= 0.0) {
        const double t0 = t + s * dt;
        const double tc = t0 + dt * prev_min_det / (prev_min_det - md);
        throw CausticError("Burgers particles cross (det D eta = 0)", tc);
      }
      prev_min_det = md;
    }
    t = t_next;
    push(t, MapSamples{chart, pu, pv}, MapSamples{chart, qu, qv});
  }
  path.steps_taken = taken;
  return path;
}

namespace {

// Vorticity / stream-function state of the torus Euler solver.
class EulerSolver {
 public:
  EulerSolver(const SurfaceChart& c, double u1, double u2)
      : chart_(c),
        fft_(c.grid().nu, c.grid().nv, c.grid().u_range.length(), c.grid().v_range.length()),
        u1_(u1),
        u2_(u2) {}

  const detail::Fft2d& fft() const { return fft_; }

  // Velocity from vorticity spectrum: X = U + (-psi_v, psi_u), laplacian psi = omega.
  void velocity(const std::vector<cplx>& w, std::vector<double>& x1, std::vector<double>& x2) const {
    std::vector<cplx> a(w.size()), b(w.size());
    for (int i = 0; i < fft_.nu(); ++i) {
      for (int j = 0; j < fft_.nvc(); ++j) {
        const std::size_t q = static_cast<std::size_t>(i) * fft_.nvc() + j;
        const double k2 = fft_.ku(i) * fft_.ku(i) + fft_.kv(j) * fft_.kv(j);
        const cplx psi = k2 > 0 ? -w[q] / k2 : cplx(0.0);
        a[q] = -cplx(0.0, fft_.dv_symbol(j)) * psi;
        b[q] = cplx(0.0, fft_.du_symbol(i)) * psi;
      }
    }
    fft_.backward(a, x1);
    fft_.backward(b, x2);
    for (auto& s : x1) s += u1_;
    for (auto& s : x2) s += u2_;
  }

  // -(X . grad omega), dealiased by the 2/3 rule.
  std::vector<cplx> rhs(const std::vector<cplx>& w, const std::vector<double>& x1,
                        const std::vector<double>& x2) const {
    std::vector<cplx> a(w.size()), b(w.size());
    for (int i = 0; i < fft_.nu(); ++i) {
      for (int j = 0; j < fft_.nvc(); ++j) {
        const std::size_t q = static_cast<std::size_t>(i) * fft_.nvc() + j;
        a[q] = cplx(0.0, fft_.du_symbol(i)) * w[q];
        b[q] = cplx(0.0, fft_.dv_symbol(j)) * w[q];
      }
    }
    std::vector<double> wu, wv;
    fft_.backward(a, wu);
    fft_.backward(b, wv);
    std::vector<double> n(wu.size());
    for (std::size_t p = 0; p < n.size(); ++p) n[p] = -(x1[p] * wu[p] + x2[p] * wv[p]);
    std::vector<cplx> out;
    fft_.forward(n, out);
    for (int i = 0; i < fft_.nu(); ++i) {
      for (int j = 0; j < fft_.nvc(); ++j) {
        if (3 * std::abs(fft_.mode_u(i)) >= fft_.nu() || 3 * fft_.mode_v(j) >= fft_.nv()) {
          out[static_cast<std::size_t>(i) * fft_.nvc() + j] = 0.0;
        }
      }
    }
    return out;
  }

 private:
  const SurfaceChart& chart_;
  detail::Fft2d fft_;
  double u1_, u2_;
};

}  // namespace

DiffeoPath euler_flow(const VectorField& x0, double t_final, int steps, const FlowOptions& o) {
  const ChartPtr& chart = x0.chart();
  const auto& c = *chart;
  require_flat_torus(c, "euler_flow");
  if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be nonnegative");
  if (steps < 0) throw InvalidArgument("steps must be nonnegative");
  require_divergence_free(x0, 1e-8, "euler_flow");
  if (steps == 0) steps = steps_from_cfl(c, x0, t_final);

  const double area = c.area();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    m1 += c.area_weights()[p] * x0.x1()[p];
    m2 += c.area_weights()[p] * x0.x2()[p];
  }
  EulerSolver solver(c, m1 / area, m2 / area);
  const auto& fft = solver.fft();
  std::vector<cplx> w;
  fft.forward(vorticity(x0).samples(), w);

  const std::size_t n = c.size();
  const auto& in = c.interpolator();
  DiffeoPath path;
  path.chart = chart;
  MapSamples eta = MapSamples::identity(chart);
  std::vector<double> x1, x2;

  auto record = [&](double t) {
    solver.velocity(w, x1, x2);
    std::vector<double> om;
    fft.backward(w, om);
    double e = 0.0, z = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      e += c.area_weights()[p] * (x1[p] * x1[p] + x2[p] * x2[p]);
      z += c.area_weights()[p] * om[p] * om[p];
    }
    MapSamples mv{chart, std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t p = 0; p < n; ++p) {
      const auto s = in.many<2>({std::span<const double>(x1), std::span<const double>(x2)},
                                eta.u[p], eta.v[p]);
      mv.u[p] = s[0];
      mv.v[p] = s[1];
    }
    path.times.push_back(t);
    path.maps.push_back(eta);
    path.velocities.emplace_back(chart, x1, x2);
    path.material_velocities.push_back(std::move(mv));
    path.energy.push_back(0.5 * e);
    path.enstrophy.push_back(0.5 * z);
  };
  record(0.0);
  if (t_final == 0.0) return path;

  const std::vector<double> times = schedule(o, t_final, steps);
  const double dt_nominal = t_final / steps;
  double t = 0.0;
  int taken = 0;
  std::vector<double> su(n), sv(n);
  for (double t_next : times) {
    const int sub = std::max(1, static_cast<int>(std::ceil((t_next - t) / dt_nominal - 1e-9)));
    const double dt = (t_next - t) / sub;
    for (int s = 0; s < sub; ++s) {
      std::array<std::vector<cplx>, 4> kw;
      std::array<std::vector<double>, 4> ku, kv;
      std::vector<cplx> ws = w;
      const double wt[4] = {0.0, 0.5, 0.5, 1.0};
      for (int st = 0; st < 4; ++st) {
        if (st > 0) {
          for (std::size_t q = 0; q < w.size(); ++q) ws[q] = w[q] + wt[st] * dt * kw[st - 1][q];
          for (std::size_t p = 0; p < n; ++p) {
            su[p] = eta.u[p] + wt[st] * dt * ku[st - 1][p];
            sv[p] = eta.v[p] + wt[st] * dt * kv[st - 1][p];
          }
        } else {
          su = eta.u;
          sv = eta.v;
        }
        solver.velocity(ws, x1, x2);
        if (st == 0) {
          const double cfl = cfl_number(c, x1, x2, dt);
          if (cfl > 0.85) {
            throw SolverError("Euler step violates the CFL limit: CFL = " + sci(cfl));
          }
        }
        kw[st] = solver.rhs(ws, x1, x2);
        ku[st].resize(n);
        kv[st].resize(n);
        for (std::size_t p = 0; p < n; ++p) {
          const auto v = in.many<2>({std::span<const double>(x1), std::span<const double>(x2)},
                                    su[p], sv[p]);
          ku[st][p] = v[0];
          kv[st][p] = v[1];
        }
      }
      for (std::size_t q = 0; q < w.size(); ++q) {
        w[q] += dt / 6 * (kw[0][q] + 2.0 * kw[1][q] + 2.0 * kw[2][q] + kw[3][q]);
      }
      for (std::size_t p = 0; p < n; ++p) {
        eta.u[p] += dt / 6 * (ku[0][p] + 2 * ku[1][p] + 2 * ku[2][p] + ku[3][p]);
        eta.v[p] += dt / 6 * (kv[0][p] + 2 * kv[1][p] + 2 * kv[2][p] + kv[3][p]);
      }
      ++taken;
    }
    t = t_next;
    record(t);
  }
  path.steps_taken = taken;
  return path;
}

ScalarField pressure_field(const VectorField& x, const Tolerances& tol) {
  const auto& c = *x.chart();
  if (c.has_boundary()) throw PreconditionError("pressure_field needs a boundaryless chart");
  require_divergence_free(x, tol.for_chart(c), "pressure_field");
  ScalarField src = div(covariant_advection(x, x));
  src *= -1.0;
  return inverse_laplacian(src);
}

VectorField second_fundamental_form(const VectorField& x, const VectorField& y,
                                    const Tolerances& tol) {
  require_same_chart(x.chart(), y.chart());
  const double t = tol.for_chart(*x.chart());
  require_divergence_free(x, t, "second_fundamental_form");
  require_divergence_free(y, t, "second_fundamental_form");
  return helmholtz_decompose(covariant_advection(x, y)).gradient_part;
}

TangencyFit tangency_order(const VectorField& x0, const TangencyOptions& o) {
  const auto& c = *x0.chart();
  require_flat_torus(c, "tangency_order");
  require_divergence_free(x0, 1e-8, "tangency_order");
  if (!(o.t_max > 0.0) || o.n_samples < 3 || !(o.decades > 0.0)) {
    throw InvalidArgument("tangency_order needs t_max > 0, n_samples >= 3, decades > 0");
  }
  TangencyFit fit;
  for (int k = 0; k < o.n_samples; ++k) {
    const double e = -o.decades * (1.0 - static_cast<double>(k) / (o.n_samples - 1));
    fit.t_samples.push_back(o.t_max * std::pow(10.0, e));
  }
  FlowOptions fo;
  fo.save_times = fit.t_samples;
  const int steps = o.steps_per_unit_time > 0
                        ? std::max(1, static_cast<int>(std::ceil(o.steps_per_unit_time * o.t_max)))
                        : 0;
  const DiffeoPath b = burgers_flow(x0, o.t_max, steps, fo);
  const DiffeoPath e = euler_flow(x0, o.t_max, steps, fo);
  // Both paths record t = 0 followed by the sample times.
  for (int k = 0; k < o.n_samples; ++k) {
    fit.distances.push_back(map_distance(b.maps[k + 1], e.maps[k + 1]));
  }
  fit.pressure_gradient_norm = l2_norm(grad(pressure_field(x0)));

  std::vector<int> valid;
  for (int k = 0; k < o.n_samples; ++k)
    if (fit.distances[k] > o.roundoff) valid.push_back(k);
  if (valid.size() < 2) {
    fit.outcome = "exact coincidence";
    fit.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    fit.fit_residual = std::numeric_limits<double>::quiet_NaN();
    fit.d2_at_zero = 0.0;
    return fit;
  }
  const double t_lo = fit.t_samples[valid.front()];
  std::vector<int> window;
  for (int k : valid)
    if (fit.t_samples[k] <= 10.0 * t_lo * (1 + 1e-9)) window.push_back(k);
  if (window.size() < 3) window = valid;

  const auto m = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m), z(m);
  Eigen::MatrixXd tq(m, 2);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double t = fit.t_samples[window[r]], d = fit.distances[window[r]];
    a(r, 0) = 1.0;
    a(r, 1) = std::log(t);
    y(r) = std::log(d);
    tq(r, 0) = 1.0;
    tq(r, 1) = t;
    z(r) = d / (t * t);
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  fit.fitted_exponent = coef(1);
  fit.fit_residual = std::sqrt((a * coef - y).squaredNorm() / static_cast<double>(m));
  fit.fit_points = static_cast<int>(m);
  const Eigen::Vector2d tc = tq.colPivHouseholderQr().solve(z);
  fit.d2_at_zero = 2.0 * tc(0);
  fit.outcome = "fit";
  return fit;
}

}  // namespace geohydro
