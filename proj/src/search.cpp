// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "geohydro/asymptotic.hpp"
#include "geohydro/error.hpp"

namespace geohydro {

namespace {

constexpr double kPi = std::numbers::pi;

// 1D Fourier family 1, cos x, sin x, cos 2x, ... (first n members) on a period.
double fourier(int k, double x) {
  if (k == 0) return 1.0;
  const int m = (k + 1) / 2;
  return (k % 2 == 1) ? std::cos(m * x) : std::sin(m * x);
}

// sin^6 bump on [margin, 1 - margin] of the unit interval, zero outside.
double cutoff(double sigma, double margin) {
  const double s = (sigma - margin) / (1.0 - 2.0 * margin);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::pow(std::sin(kPi * s), 6);
}

// Per-basis-function data, each row of length chart.size().
struct Basis {
  int count = 0;
  std::size_t points = 0;
  Eigen::MatrixXd psi, pu, pv, h11, h12, h22;
};

Basis build_basis(const SurfaceChart& c, const SearchOptions& o) {
  const auto& g = c.grid();
  const int l = o.band_limit;
  std::vector<std::vector<double>> raw;
  const double period_v = g.v_range.length();
  for (int a = 0; a < l; ++a) {
    for (int b = 0; b < l; ++b) {
      if (g.u_periodic && a == 0 && b == 0) continue;
      std::vector<double> s(c.size());
      for (int i = 0; i < g.nu; ++i) {
        const double sigma = (g.u(i) - g.u_range.lo) / g.u_range.length();
        double fu;
        if (g.u_periodic) {
          fu = fourier(a, 2.0 * kPi * sigma);
        } else {
          const double t = (sigma - o.margin) / (1.0 - 2.0 * o.margin);
          fu = cutoff(sigma, o.margin) * std::cos(a * kPi * t);
        }
        for (int j = 0; j < g.nv; ++j) {
          const double phi = 2.0 * kPi * (g.v(j) - g.v_range.lo) / period_v;
          s[g.index(i, j)] = fu * fourier(b, phi);
        }
      }
      raw.push_back(std::move(s));
    }
  }
  ChartPtr holder(&c, [](const SurfaceChart*) {});
  Basis out;
  out.count = static_cast<int>(raw.size());
  out.points = c.size();
  const auto n = static_cast<Eigen::Index>(c.size());
  out.psi.resize(out.count, n);
  out.pu.resize(out.count, n);
  out.pv.resize(out.count, n);
  out.h11.resize(out.count, n);
  out.h12.resize(out.count, n);
  out.h22.resize(out.count, n);
  for (int k = 0; k < out.count; ++k) {
    const ScalarField f(holder, raw[k]);
    const auto du = c.ops().du(f.samples());
    const auto dv = c.ops().dv(f.samples());
    const SymmetricTensor h = hessian(f, o.convention);
    for (Eigen::Index p = 0; p < n; ++p) {
      out.psi(k, p) = f[p];
      out.pu(k, p) = du[p];
      out.pv(k, p) = dv[p];
      out.h11(k, p) = h.h11[p];
      out.h12(k, p) = h.h12[p];
      out.h22(k, p) = h.h22[p];
    }
  }
  // Orthonormalize in the Dirichlet inner product so ||grad psi||^2 = |c|^2.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(out.count, out.count);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double w = c.area_weights()[p];
    Eigen::VectorXd gu = out.pu.col(p), gv = out.pv.col(p);
    gram.noalias() += w * (c.ginv11()[p] * gu * gu.transpose() +
                           c.ginv12()[p] * (gu * gv.transpose() + gv * gu.transpose()) +
                           c.ginv22()[p] * gv * gv.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int k = 0; k < out.count; ++k)
    if (es.eigenvalues()(k) > 1e-12 * top) keep.push_back(k);
  Eigen::MatrixXd t(keep.size(), out.count);
  for (std::size_t r = 0; r < keep.size(); ++r)
    t.row(r) = es.eigenvectors().col(keep[r]).transpose() / std::sqrt(es.eigenvalues()(keep[r]));
  out.psi = t * out.psi;
  out.pu = t * out.pu;
  out.pv = t * out.pv;
  out.h11 = t * out.h11;
  out.h12 = t * out.h12;
  out.h22 = t * out.h22;
  out.count = static_cast<int>(keep.size());
  return out;
}

// Residuals sqrt(w_p) ma_p(c) / G(c) with G = |grad psi|^2_L2 = |c|^2.
class NormalizedMaCost : public ceres::CostFunction {
 public:
  NormalizedMaCost(const SurfaceChart& chart, const Basis& basis)
      : chart_(chart), basis_(basis) {
    set_num_residuals(static_cast<int>(basis.points));
    mutable_parameter_block_sizes()->push_back(basis.count);
  }

  bool Evaluate(double const* const* parameters, double* residuals,
                double** jacobians) const override {
    const Eigen::Map<const Eigen::VectorXd> c(parameters[0], basis_.count);
    const double g = c.squaredNorm();
    if (!(g > 0.0)) return false;
    const Eigen::RowVectorXd ct = c.transpose();
    const Eigen::RowVectorXd pu = ct * basis_.pu, pv = ct * basis_.pv;
    const Eigen::RowVectorXd h11 = ct * basis_.h11, h12 = ct * basis_.h12, h22 = ct * basis_.h22;
    const auto& ch = chart_;
    const int n = static_cast<int>(basis_.points);
    for (int p = 0; p < n; ++p) {
      const double s = std::sqrt(ch.weights()[p] * ch.sqrt_det_g()[p]);
      const double k = 0.5 * ch.det_g()[p] * ch.curvature()[p];
      const double grad2 = ch.ginv11()[p] * pu(p) * pu(p) + 2 * ch.ginv12()[p] * pu(p) * pv(p) +
                           ch.ginv22()[p] * pv(p) * pv(p);
      const double ma = h11(p) * h22(p) - h12(p) * h12(p) - k * grad2;
      residuals[p] = s * ma / g;
      if (jacobians && jacobians[0]) {
        double* row = jacobians[0] + static_cast<std::size_t>(p) * basis_.count;
        for (int q = 0; q < basis_.count; ++q) {
          const double dma =
              basis_.h11(q, p) * h22(p) + h11(p) * basis_.h22(q, p) -
              2 * h12(p) * basis_.h12(q, p) -
              2 * k * (ch.ginv11()[p] * pu(p) * basis_.pu(q, p) +
                       ch.ginv12()[p] * (pu(p) * basis_.pv(q, p) + pv(p) * basis_.pu(q, p)) +
                       ch.ginv22()[p] * pv(p) * basis_.pv(q, p));
          row[q] = s * (dma / g - 2.0 * ma * c(q) / (g * g));
        }
      }
    }
    return true;
  }

 private:
  const SurfaceChart& chart_;
  const Basis& basis_;
};

}  // namespace

SearchResult nonexistence_search(const ChartPtr& chart, const SearchOptions& o) {
  if (!chart) throw InvalidArgument("search needs a chart");
  if (o.restarts < 1) throw InvalidArgument("search needs at least one restart");
  if (o.band_limit < 1) throw InvalidArgument("band limit must be positive");
  if (!(o.margin >= 0.0 && o.margin < 0.5)) throw InvalidArgument("margin must lie in [0, 0.5)");
  if (!chart->grid().v_periodic) throw InvalidArgument("search needs a periodic v direction");
  const Basis basis = build_basis(*chart, o);
  if (basis.count < 1) throw SolverError("search basis is empty on this grid");

  SearchResult result;
  result.restarts = o.restarts;
  result.parameters = basis.count;
  result.normalized_residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  int failures = 0;
  for (int r = 0; r < o.restarts; ++r) {
    std::seed_seq seq{o.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Eigen::VectorXd c(basis.count);
    for (int k = 0; k < basis.count; ++k) c(k) = normal(rng);
    c.normalize();

    RestartRecord rec;
    ceres::Problem problem;
    problem.AddResidualBlock(new NormalizedMaCost(*chart, basis), nullptr, c.data());
    if (basis.count > 1) {
      problem.SetParameterization(c.data(), new ceres::HomogeneousVectorParameterization(basis.count));
    }
    ceres::Solver::Options opts;
    opts.minimizer_type = ceres::TRUST_REGION;
    opts.trust_region_strategy_type = ceres::LEVENBERG_MARQUARDT;
    opts.linear_solver_type = ceres::DENSE_QR;
    opts.max_num_iterations = o.max_iterations;
    opts.function_tolerance = 1e-14;
    opts.gradient_tolerance = 1e-20;
    opts.parameter_tolerance = 1e-14;
    opts.num_threads = 1;
    opts.logging_type = ceres::SILENT;
    opts.minimizer_progress_to_stdout = false;
    ceres::Solver::Summary summary;
    ceres::Solve(opts, &problem, &summary);

    rec.initial_residual = 2.0 * summary.initial_cost;
    rec.final_residual = 2.0 * summary.final_cost;
    rec.iterations = static_cast<int>(summary.iterations.size()) - 1;
    rec.converged = summary.termination_type == ceres::CONVERGENCE;
    for (const auto& it : summary.iterations) rec.residual_history.push_back(2.0 * it.cost);
    if (!summary.IsSolutionUsable() || !std::isfinite(rec.final_residual)) {
      ++failures;
      rec.converged = false;
    } else if (rec.final_residual < result.normalized_residual) {
      result.normalized_residual = rec.final_residual;
      best = c;
    }
    result.runs.push_back(std::move(rec));
  }
  if (failures == o.restarts || best.size() == 0) {
    throw SolverError("non-existence search: every restart failed");
  }
  const Eigen::VectorXd psi = basis.psi.transpose() * best;
  result.best_psi = ScalarField(chart, std::vector<double>(psi.data(), psi.data() + psi.size()));
  return result;
}

}  // namespace geohydro
