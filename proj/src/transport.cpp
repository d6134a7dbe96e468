// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/transport.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/IterativeSolvers>

#include "fft2d.hpp"
#include "geohydro/error.hpp"

namespace geohydro {
namespace {

// Linearized transport operator
//   L d = a d_uu + b d_uv + c d_vv + q1 d_u + q2 d_v
// on the flat torus (coefficients frozen at the current Newton iterate).
class TransportJacobian;

}  // namespace
}  // namespace geohydro

namespace Eigen::internal {
template <>
struct traits<geohydro::TransportJacobian>
    : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace geohydro {
namespace {

class TransportJacobian : public Eigen::EigenBase<TransportJacobian> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic,
    IsRowMajor = false
  };

  TransportJacobian(const SurfaceChart& c, std::vector<double> a, std::vector<double> b,
                    std::vector<double> cc, std::vector<double> q1, std::vector<double> q2)
      : chart_(c), a_(std::move(a)), b_(std::move(b)), c_(std::move(cc)), q1_(std::move(q1)),
        q2_(std::move(q2)) {}

  Eigen::Index rows() const { return static_cast<Eigen::Index>(chart_.size()); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<TransportJacobian, Rhs, Eigen::AliasFreeProduct> operator*(
      const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<TransportJacobian, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    const std::span<const double> d(in.data(), static_cast<std::size_t>(in.size()));
    const auto& ops = chart_.ops();
    const auto du = ops.du(d), dv = ops.dv(d), duu = ops.duu(d), duv = ops.duv(d),
               dvv = ops.dvv(d);
    out.resize(in.size());
    for (std::size_t p = 0; p < chart_.size(); ++p) {
      out(p) = a_[p] * duu[p] + b_[p] * duv[p] + c_[p] * dvv[p] + q1_[p] * du[p] + q2_[p] * dv[p];
    }
  }

 private:
  const SurfaceChart& chart_;
  std::vector<double> a_, b_, c_, q1_, q2_;
};

// Inverse flat Laplacian on zero-mean periodic functions (mean is dropped).
class LaplacePreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  LaplacePreconditioner() = default;

  template <typename M>
  LaplacePreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  LaplacePreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  LaplacePreconditioner& compute(const M&) { return *this; }

  void set_fft(const detail::Fft2d* fft) { fft_ = fft; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    const Eigen::VectorXd in = b;
    std::vector<std::complex<double>> s;
    fft_->forward(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())), s);
    for (int i = 0; i < fft_->nu(); ++i) {
      for (int j = 0; j < fft_->nvc(); ++j) {
        const double k2 = fft_->ku(i) * fft_->ku(i) + fft_->kv(j) * fft_->kv(j);
        auto& z = s[static_cast<std::size_t>(i) * fft_->nvc() + j];
        z = k2 > 0 ? -z / k2 : 0.0;
      }
    }
    std::vector<double> out;
    fft_->backward(s, out);
    return Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  const detail::Fft2d* fft_ = nullptr;
};

}  // namespace
}  // namespace geohydro

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<geohydro::TransportJacobian, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<geohydro::TransportJacobian, Rhs,
                                generic_product_impl<geohydro::TransportJacobian, Rhs>> {
  using Scalar = typename Product<geohydro::TransportJacobian, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const geohydro::TransportJacobian& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    Eigen::VectorXd y;
    lhs.apply(rhs, y);
    dst.noalias() += alpha * y;
  }
};
}  // namespace Eigen::internal

namespace geohydro {

namespace {

void require_torus(const SurfaceChart& c, const char* who) {
  if (!c.is_flat()) throw PreconditionError(std::string(who) + " is only supported on the flat torus");
}

struct Hessian2 {
  std::vector<double> uu, uv, vv;
};

Hessian2 hessian_of(const ScalarField& u) {
  const auto& ops = u.chart()->ops();
  return {ops.duu(u.samples()), ops.duv(u.samples()), ops.dvv(u.samples())};
}

// Convexity guard for I + s D^2 u.
bool guard(const Hessian2& h, double s = 1.0) {
  for (std::size_t p = 0; p < h.uu.size(); ++p) {
    const double a = 1 + s * h.uu[p], c = 1 + s * h.vv[p], b = s * h.uv[p];
    if (!(a * c - b * b > 0.0) || !(a + c > 0.0)) return false;
  }
  return true;
}

struct Evaluation {
  std::vector<double> f;
  double sup = 0.0;
  Hessian2 h;
};

Evaluation evaluate(const ScalarField& u, const Density& m, const Density& n) {
  const auto& c = *u.chart();
  const auto& ops = c.ops();
  Evaluation e;
  e.h = hessian_of(u);
  const auto gu = ops.du(u.samples()), gv = ops.dv(u.samples());
  const auto& g = c.grid();
  const auto& in = c.interpolator();
  e.f.resize(c.size());
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t p = g.index(i, j);
      const double det = (1 + e.h.uu[p]) * (1 + e.h.vv[p]) - e.h.uv[p] * e.h.uv[p];
      const double nt = in(n.samples(), g.u(i) + gu[p], g.v(j) + gv[p]);
      e.f[p] = det - m[p] / nt;
      e.sup = std::max(e.sup, std::abs(e.f[p]));
    }
  }
  return e;
}

}  // namespace

Density Density::normalized(const ScalarField& samples) {
  if (!samples.chart()) throw InvalidArgument("density has no chart");
  for (double s : samples.samples()) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("density samples must be positive");
  }
  const double mass = integrate(samples);
  Density d;
  d.f_ = samples;
  d.f_ *= 1.0 / mass;
  return d;
}

Density Density::uniform(const ChartPtr& chart) {
  return normalized(ScalarField(chart, 1.0));
}

double Density::mass() const { return integrate(f_); }

MapSamples TransportPotential::map(double t) const {
  const auto& c = *u.chart();
  MapSamples m = MapSamples::identity(u.chart());
  const auto gu = c.ops().du(u.samples()), gv = c.ops().dv(u.samples());
  for (std::size_t p = 0; p < c.size(); ++p) {
    m.u[p] += t * gu[p];
    m.v[p] += t * gv[p];
  }
  return m;
}

bool TransportPotential::convex() const { return guard(hessian_of(u)); }

Density pushforward(const MapSamples& eta, const Density& m) {
  require_same_chart(eta.chart, m.chart());
  const auto& c = *eta.chart;
  const ScalarField jac = jacobian_determinant(eta);
  for (double j : jac.samples()) {
    if (!(j > 0.0)) throw PreconditionError("pushforward: map folds (det D eta <= 0)");
  }
  const MapSamples inv = invert_map(eta);
  std::vector<double> ms(c.size());
  for (std::size_t p = 0; p < c.size(); ++p) ms[p] = m[p] * c.sqrt_det_g()[p];
  const auto& in = c.interpolator();
  ScalarField n(eta.chart);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const auto s = in.many<2>({std::span<const double>(ms), std::span<const double>(jac.samples())},
                              inv.u[p], inv.v[p]);
    n[p] = s[0] / (s[1] * c.sqrt_det_g()[p]);
  }
  const double drift = std::abs(integrate(n) - 1.0);
  if (drift > 1e-8) {
    throw SolverError("pushforward mass drift " + sci(drift) + " exceeds 1e-8");
  }
  return Density::normalized(n);
}

ScalarField transport_residual(const TransportPotential& phi, const Density& m, const Density& n) {
  require_same_chart(phi.u.chart(), m.chart());
  require_same_chart(phi.u.chart(), n.chart());
  require_torus(*phi.u.chart(), "transport_residual");
  if (!phi.convex()) throw PreconditionError("transport potential violates the convexity guard");
  return ScalarField(phi.u.chart(), evaluate(phi.u, m, n).f);
}

TransportSolution solve_transport(const Density& m, const Density& n, double tol, int max_iters) {
  require_same_chart(m.chart(), n.chart());
  const ChartPtr& chart = m.chart();
  const auto& c = *chart;
  require_torus(c, "solve_transport");
  if (!(tol > 0.0) || max_iters < 1) throw InvalidArgument("solve_transport needs tol > 0, max_iters >= 1");
  const auto& g = c.grid();
  const auto& ops = c.ops();
  const auto& in = c.interpolator();
  const detail::Fft2d fft(g.nu, g.nv, g.u_range.length(), g.v_range.length());
  const auto nu_ = ops.du(n.samples()), nv_ = ops.dv(n.samples());

  TransportSolution sol;
  ScalarField u(chart, 0.0);
  Evaluation e = evaluate(u, m, n);
  sol.residual_history.push_back(e.sup);
  while (true) {
    if (e.sup <= tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iters) {
      sol.message = "iteration cap reached";
      break;
    }
    const auto gu = ops.du(u.samples()), gv = ops.dv(u.samples());
    std::vector<double> a(c.size()), b(c.size()), cc(c.size()), q1(c.size()), q2(c.size());
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) {
        const std::size_t p = g.index(i, j);
        const auto s = in.many<3>({std::span<const double>(n.samples()),
                                   std::span<const double>(nu_), std::span<const double>(nv_)},
                                  g.u(i) + gu[p], g.v(j) + gv[p]);
        a[p] = 1 + e.h.vv[p];
        b[p] = -2 * e.h.uv[p];
        cc[p] = 1 + e.h.uu[p];
        const double w = m[p] / (s[0] * s[0]);
        q1[p] = w * s[1];
        q2[p] = w * s[2];
      }
    }
    const TransportJacobian jac(c, std::move(a), std::move(b), std::move(cc), std::move(q1),
                                std::move(q2));
    Eigen::GMRES<TransportJacobian, LaplacePreconditioner> gmres;
    gmres.preconditioner().set_fft(&fft);
    gmres.set_restart(60);
    gmres.setMaxIterations(400);
    gmres.setTolerance(1e-13);
    gmres.compute(jac);
    const Eigen::VectorXd rhs =
        -Eigen::Map<const Eigen::VectorXd>(e.f.data(), static_cast<Eigen::Index>(e.f.size()));
    Eigen::VectorXd delta = gmres.solve(rhs);
    delta.array() -= delta.mean();

    double lambda = 1.0;
    bool accepted = false;
    int halvings = 0;
    for (; halvings <= 30; ++halvings, lambda *= 0.5) {
      ScalarField trial = u;
      for (std::size_t p = 0; p < c.size(); ++p) trial[p] += lambda * delta(p);
      if (!guard(hessian_of(trial))) continue;
      Evaluation et = evaluate(trial, m, n);
      if (!(et.sup < e.sup)) continue;
      u = std::move(trial);
      e = std::move(et);
      accepted = true;
      break;
    }
    ++sol.iterations;
    sol.halvings.push_back(std::min(halvings, 30));
    if (!accepted) {
      sol.message = "damping exhausted (30 halvings) without guard and residual decrease";
      break;
    }
    sol.residual_history.push_back(e.sup);
  }
  sol.potential.u = std::move(u);
  return sol;
}

Interpolant displacement_interpolation(const TransportPotential& phi, const Density& m, double t) {
  require_same_chart(phi.u.chart(), m.chart());
  require_torus(*m.chart(), "displacement_interpolation");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("interpolation time must lie in [0, 1]");
  if (!guard(hessian_of(phi.u), t)) {
    throw Error("convexity lost at an intermediate time; the endpoint guard should prevent this");
  }
  Interpolant out;
  out.eta = phi.map(t);
  out.rho = t == 0.0 ? m : pushforward(out.eta, m);
  return out;
}

ResidualReport submersion_check(const TransportPotential& phi, const Density& m, int n_times,
                                double tol) {
  require_same_chart(phi.u.chart(), m.chart());
  const ChartPtr& chart = m.chart();
  const auto& c = *chart;
  require_torus(c, "submersion_check");
  if (n_times < 1) throw InvalidArgument("submersion_check needs n_times >= 1");
  if (!phi.convex()) throw PreconditionError("transport potential violates the convexity guard");
  const VectorField gu = grad(phi.u);
  FlowOptions fo;
  for (int k = 1; k <= n_times; ++k) fo.save_times.push_back(static_cast<double>(k) / n_times);
  const DiffeoPath burgers = burgers_flow(gu, 1.0, n_times, fo);
  const auto& in = c.interpolator();

  auto kinetic = [&](const VectorField& v, const Density& rho) {
    double s = 0.0;
    for (std::size_t p = 0; p < c.size(); ++p) {
      s += c.area_weights()[p] * rho[p] * (v.x1()[p] * v.x1()[p] + v.x2()[p] * v.x2()[p]);
    }
    return s;
  };
  const double cost = kinetic(gu, m);
  std::vector<double> action_samples{cost};
  double horiz = 0.0, coincide = 0.0, proj = 0.0;
  for (int k = 1; k <= n_times; ++k) {
    const double t = static_cast<double>(k) / n_times;
    const Interpolant di = displacement_interpolation(phi, m, t);
    const MapSamples inv = invert_map(di.eta);
    VectorField v(chart);
    for (std::size_t p = 0; p < c.size(); ++p) {
      const auto s = in.many<2>({std::span<const double>(gu.x1()), std::span<const double>(gu.x2())},
                                inv.u[p], inv.v[p]);
      v.x1()[p] = s[0];
      v.x2()[p] = s[1];
    }
    horiz = std::max(horiz, sup_norm(helmholtz_decompose(v).divergence_free));
    const MapSamples& bm = burgers.maps[k];
    for (std::size_t p = 0; p < c.size(); ++p) {
      coincide = std::max({coincide, std::abs(bm.u[p] - di.eta.u[p]), std::abs(bm.v[p] - di.eta.v[p])});
    }
    const auto rho_at = compose(di.rho.field(), di.eta);
    const ScalarField jac = jacobian_determinant(di.eta);
    for (std::size_t p = 0; p < c.size(); ++p) proj = std::max(proj, std::abs(rho_at[p] * jac[p] - m[p]));
    action_samples.push_back(kinetic(v, di.rho));
  }
  // Trapezoid in t over 0, 1/n, ..., 1 (the integrand is constant on a geodesic).
  double action = 0.0;
  for (int k = 0; k < n_times; ++k) action += 0.5 * (action_samples[k] + action_samples[k + 1]) / n_times;
  const double action_gap = cost > 0 ? std::abs(action - cost) / cost : std::abs(action - cost);

  ResidualReport r("submersion_check");
  r.add("horizontality", NormKind::Sup, horiz, tol,
        "max over sampled t of sup |P(V_t)|, V_t = grad u o eta_t^-1, P the divergence-free projection");
  r.add("burgers_coincidence", NormKind::Sup, coincide, tol,
        "max over sampled t and nodes of |eta_t(x) - burgers_flow(grad u)_t(x)|");
  r.add("projection", NormKind::Sup, proj, tol,
        "max over sampled t of sup |rho_t(eta_t(x)) det D eta_t(x) - m(x)|");
  r.add("action_vs_cost", NormKind::Sup, action_gap, 1e-4,
        "|integral_0^1 integral |V_t|^2 rho_t dA dt - integral |grad u|^2 m dA| / cost");
  r.add_metric("cost", cost, "integral |grad u|^2 m dA");
  r.add_metric("action", action, "trapezoid-in-time integral of integral |V_t|^2 rho_t dA");
  r.add_metric("n_times", n_times);
  return r;
}

ResidualReport vertical_departure_rate(const VectorField& x0, double dt, double tol) {
  const ChartPtr& chart = x0.chart();
  const auto& c = *chart;
  require_torus(c, "vertical_departure_rate");
  const double d = sup_norm(div(x0));
  if (!(d <= 1e-8 * std::max(1.0, sup_norm(x0)))) {
    throw PreconditionError("vertical_departure_rate needs a divergence-free field: sup |div X| = " +
                            sci(d));
  }
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const Density m = Density::uniform(chart);
  const double rho_max = m[0];
  // Round-off in the densities is amplified by 1/dt^2 in the second difference.
  const double noise = 64 * std::numeric_limits<double>::epsilon() * rho_max / (dt * dt);
  if (noise > 0.1 * tol) {
    throw InvalidArgument("dt too small: round-off in the second difference ~ " + sci(noise));
  }
  VectorField back = x0;
  back *= -1.0;
  FlowOptions fo;
  fo.save_times = {dt};
  const DiffeoPath fwd = burgers_flow(x0, dt, 1, fo);
  const DiffeoPath bwd = burgers_flow(back, dt, 1, fo);
  const Density rp = pushforward(fwd.maps.back(), m);
  const Density rm = pushforward(bwd.maps.back(), m);
  ScalarField d1(chart), d2(chart);
  for (std::size_t p = 0; p < c.size(); ++p) {
    d1[p] = (rp[p] - rm[p]) / (2 * dt);
    d2[p] = (rp[p] - 2 * m[p] + rm[p]) / (dt * dt);
  }
  ResidualReport r("vertical_departure_rate");
  r.add("first_derivative", NormKind::L2, l2_norm(d1), tol,
        "||d/dt rho_t||_L2 at t = 0 (central difference), rho_t = (x + t X0)_* uniform");
  r.add("second_derivative", NormKind::L2, l2_norm(d2), tol,
        "||d^2/dt^2 rho_t||_L2 at t = 0 (central difference)");
  r.add_metric("dt", dt);
  r.add_metric("roundoff_estimate", noise, "64 eps max(rho) / dt^2");
  return r;
}

}  // namespace geohydro
