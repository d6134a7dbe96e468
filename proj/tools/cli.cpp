// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "geohydro/asymptotic.hpp"
#include "geohydro/expression.hpp"
#include "geohydro/geodesic.hpp"
#include "geohydro/io.hpp"
#include "geohydro/surface.hpp"
#include "geohydro/transport.hpp"

namespace geohydro::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"verify",    "search",     "tangency",
                                             "transport", "submersion", "surface-info"};
  return c;
}

namespace {

constexpr double kPi = std::numbers::pi;

const Expression::Bindings kFieldVars = {{"u", 0}, {"v", 1}, {"x", 0}, {"y", 1}, {"t", 0}, {"phi", 1}};

Expression parse_expr(const ExperimentConfig& c, const std::string& key, const std::string& fallback) {
  try {
    return Expression::parse(c.text(key, fallback), kFieldVars);
  } catch (const Error& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

ScalarField sample_expr(const ChartPtr& chart, const Expression& e) {
  return ScalarField::sample(chart, [&e](double u, double v) { return e(u, v); });
}

// chart.* keys, with those from chart.file filling the gaps.
ExperimentConfig chart_keys(const ExperimentConfig& c) {
  ExperimentConfig out;
  if (c.has("chart.file")) {
    const ExperimentConfig f = ExperimentConfig::load(c.text("chart.file"));
    for (const auto& [k, v] : f.values()) {
      if (k.rfind("chart.", 0) != 0 || k == "chart.file") {
        throw ConfigError("chart.file may only contain chart.* keys (found " + k + ")");
      }
      out.set(k, v);
    }
  }
  for (const auto& [k, v] : c.values()) {
    if (k.rfind("chart.", 0) == 0 && k != "chart.file") out.set(k, v);
  }
  return out;
}

ChartPtr build_chart(const ExperimentConfig& cfg) {
  const ExperimentConfig c = chart_keys(cfg);
  const std::string kind = c.text("chart.kind", "torus");
  if (kind == "torus") {
    return build_flat_torus(c.number("chart.lx", 2 * kPi), c.number("chart.ly", 2 * kPi),
                            c.integer("chart.nu", 64), c.integer("chart.nv", 64));
  }
  if (kind == "sphere_band") {
    return build_sphere_band(c.number("chart.theta_min", kPi / 6), c.number("chart.theta_max", 5 * kPi / 6),
                             c.integer("chart.nu", 64), c.integer("chart.nv", 128));
  }
  if (kind == "revolution") {
    const Interval range{c.number("chart.t_min", 0.0), c.number("chart.t_max", 2 * kPi)};
    const bool periodic = c.flag("chart.t_periodic", false);
    const int nv = c.integer("chart.nv", 64);
    if (c.has("chart.profile_table")) {
      if (c.has("chart.profile")) throw ConfigError("give chart.profile or chart.profile_table, not both");
      std::vector<double> rho;
      for (const auto& w : c.list("chart.profile_table")) {
        try {
          rho.push_back(evaluate_constant(w));
        } catch (const Error& e) {
          throw ConfigError(std::string("chart.profile_table: ") + e.what());
        }
      }
      if (c.has("chart.nu") && c.integer("chart.nu", 0) != static_cast<int>(rho.size())) {
        throw ConfigError("chart.profile_table must have chart.nu entries");
      }
      return build_revolution_from_samples(rho, range, nv, periodic);
    }
    if (!c.has("chart.profile")) throw ConfigError("revolution chart needs chart.profile or chart.profile_table");
    Profile p;
    try {
      p = Profile::from_expression(c.text("chart.profile"));
    } catch (const Error& e) {
      throw ConfigError(std::string("chart.profile: ") + e.what());
    }
    return build_revolution(p, range, c.integer("chart.nu", 64), nv, periodic);
  }
  throw ConfigError("chart.kind must be torus, sphere_band or revolution");
}

ordered_json chart_json(const SurfaceChart& c) {
  const auto& g = c.grid();
  ordered_json j;
  j["kind"] = to_string(c.kind());
  j["nu"] = g.nu;
  j["nv"] = g.nv;
  j["u_range"] = {json_number(g.u_range.lo), json_number(g.u_range.hi)};
  j["v_range"] = {json_number(g.v_range.lo), json_number(g.v_range.hi)};
  j["u_periodic"] = g.u_periodic;
  j["v_periodic"] = g.v_periodic;
  return j;
}

struct FieldInput {
  VectorField x;
  std::optional<ScalarField> psi;
};

bool has_field(const ExperimentConfig& c) {
  return c.has("field.psi") || c.has("field.x1") || c.has("field.x2");
}

FieldInput build_field(const ExperimentConfig& c, const ChartPtr& chart) {
  FieldInput f;
  if (c.has("field.psi")) {
    if (c.has("field.x1") || c.has("field.x2")) throw ConfigError("give field.psi or field.x1/x2, not both");
    f.psi = sample_expr(chart, parse_expr(c, "field.psi", "0"));
    f.x = symplectic_gradient(*f.psi);
  } else {
    const Expression e1 = parse_expr(c, "field.x1", "0"), e2 = parse_expr(c, "field.x2", "0");
    f.x = VectorField::sample(chart, [&](double u, double v) { return e1(u, v); },
                              [&](double u, double v) { return e2(u, v); });
  }
  return f;
}

Tolerances tolerances(const ExperimentConfig& c) {
  Tolerances t;
  t.flat = c.number("tol.flat", t.flat);
  t.curved = c.number("tol.curved", t.curved);
  if (!(t.flat > 0 && t.curved > 0)) throw ConfigError("tolerances must be positive");
  return t;
}

HessianConvention convention(const ExperimentConfig& c) {
  const std::string v = c.text("convention", "covariant");
  if (v == "covariant") return HessianConvention::Covariant;
  if (v == "coordinate") return HessianConvention::Coordinate;
  throw ConfigError("convention must be covariant or coordinate");
}

void require_torus(const ChartPtr& chart, const std::string& cmd) {
  if (!chart->is_flat()) throw ConfigError(cmd + " runs on the flat torus only (chart.kind = torus)");
}

// Collects output files and writes them at the end.
class Output {
 public:
  explicit Output(const ExperimentConfig& c) : dir_(c.text("output", ".")), dump_(c.flag("dump", false)) {}

  bool dump() const { return dump_; }

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

  std::vector<std::string> write() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    std::vector<std::string> names;
    for (const auto& [name, content] : files_) {
      std::ofstream f(dir_ / name, std::ios::binary);
      f << content;
      if (!f) throw Error("cannot write " + (dir_ / name).string());
      names.push_back(name);
    }
    return names;
  }

 private:
  fs::path dir_;
  bool dump_;
  std::vector<std::pair<std::string, std::string>> files_;
};

template <typename F>
std::string to_text(F&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

ordered_json reports_json(const std::vector<ResidualReport>& reports) {
  ordered_json a = ordered_json::array();
  for (const auto& r : reports) a.push_back(r.to_json());
  return a;
}

bool all_pass(const std::vector<ResidualReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const ResidualReport& r) { return r.all_pass(); });
}

// ---- verify ----------------------------------------------------------------

ordered_json cmd_verify(const ExperimentConfig& c, const ChartPtr& chart, Output& out, bool& pass) {
  const FieldInput f = build_field(c, chart);
  const Tolerances tol = tolerances(c);
  const HessianConvention conv = convention(c);
  std::vector<std::string> checks = c.has("checks") ? c.list("checks") : std::vector<std::string>{"asymptotic"};
  static const std::vector<std::string> all = {"asymptotic", "ma", "equivalence", "boundary", "kg", "maxpoint"};
  if (checks.size() == 1 && checks[0] == "all") {
    checks = {"asymptotic"};
    if (f.psi) checks.insert(checks.end(), {"ma", "equivalence"});
    if (chart->has_boundary()) checks.insert(checks.end(), {"boundary", "kg"});
    checks.push_back("maxpoint");
  }
  std::set<std::string> seen;
  for (const auto& k : checks) {
    if (std::find(all.begin(), all.end(), k) == all.end()) throw ConfigError("unknown check '" + k + "'");
    if (!seen.insert(k).second) throw ConfigError("check '" + k + "' listed twice");
    if ((k == "ma" || k == "equivalence") && !f.psi) throw ConfigError("check '" + k + "' needs field.psi");
    if ((k == "boundary" || k == "kg") && !chart->has_boundary()) {
      throw ConfigError("check '" + k + "' needs a chart with boundary");
    }
  }

  std::vector<ResidualReport> reports;
  ordered_json errors = ordered_json::object();
  for (const auto& k : checks) {
    try {
      if (k == "asymptotic") {
        reports.push_back(asymptotic_residuals(f.x, tol));
      } else if (k == "ma") {
        ResidualReport r("ma_residual");
        const ScalarField ma = ma_residual(*f.psi, conv);
        r.add("ma", NormKind::Sup, sup_norm(ma), tol.for_chart(*chart),
              "sup |det D^2 psi - (g K / 2) |grad psi|^2|");
        r.add("ma_L2", NormKind::L2, l2_norm(ma), tol.for_chart(*chart), "L2 norm of the same residual");
        r.add_metric("normalized_residual", normalized_residual(*f.psi, conv),
                     "||ma||_L2^2 / ||grad psi||_L2^4");
        reports.push_back(std::move(r));
      } else if (k == "equivalence") {
        reports.push_back(equivalence_check(*f.psi, tol, conv));
      } else if (k == "boundary") {
        reports.push_back(boundary_residuals(f.x, tol));
      } else if (k == "kg") {
        reports.push_back(kg_identity_residual(f.x, tol));
      } else if (k == "maxpoint") {
        reports.push_back(maxpoint_diagnostic(f.x, tol));
      }
    } catch (const PreconditionError& e) {
      errors[k] = e.what();
    }
  }
  if (out.dump()) {
    out.add("field.csv", to_text([&](std::ostream& s) { write_field_csv(s, f.x); }));
    if (f.psi) out.add("psi.csv", to_text([&](std::ostream& s) { write_field_csv(s, *f.psi, "psi"); }));
  }
  pass = all_pass(reports) && errors.empty();
  ordered_json j;
  j["checks"] = checks;
  j["reports"] = reports_json(reports);
  if (!errors.empty()) j["precondition_failures"] = errors;
  return j;
}

// ---- search ----------------------------------------------------------------

ordered_json cmd_search(const ExperimentConfig& c, const ChartPtr& chart, Output& out, bool& pass) {
  SearchOptions o;
  o.seed = c.seed();
  o.restarts = c.integer("search.restarts", o.restarts);
  o.band_limit = c.integer("search.band_limit", o.band_limit);
  o.max_iterations = c.integer("search.max_iterations", o.max_iterations);
  o.margin = c.number("search.margin", o.margin);
  o.convention = convention(c);
  if (o.restarts < 1) throw ConfigError("search.restarts must be at least 1");
  if (o.band_limit < 1) throw ConfigError("search.band_limit must be at least 1");
  if (o.max_iterations < 1) throw ConfigError("search.max_iterations must be at least 1");
  const double threshold = c.number("search.threshold", 1e-8);

  const SearchResult r = nonexistence_search(chart, o);
  pass = true;
  ordered_json j;
  j["normalized_residual_floor"] = json_number(r.normalized_residual);
  j["threshold"] = json_number(threshold);
  j["verdict"] = r.normalized_residual < threshold ? "solutions exist" : "no solution found";
  j["parameters"] = r.parameters;
  j["restarts"] = r.restarts;
  j["seed"] = o.seed;
  j["definitions"] = {
      {"normalized_residual", "||det D^2 psi - (g K / 2)|grad psi|^2||_L2^2 / ||grad psi||_L2^4, "
                              "minimized over the band-limited stream-function family"},
      {"threshold", "floors below this value are reported as 'solutions exist'"}};
  ordered_json runs = ordered_json::array();
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    const auto& run = r.runs[k];
    runs.push_back({{"initial", json_number(run.initial_residual)},
                    {"final", json_number(run.final_residual)},
                    {"iterations", run.iterations},
                    {"converged", run.converged}});
    for (std::size_t it = 0; it < run.residual_history.size(); ++it) {
      rows.push_back({static_cast<double>(k), static_cast<double>(it), run.residual_history[it]});
    }
  }
  j["runs"] = runs;
  out.add("search_history.csv",
          to_text([&](std::ostream& s) { write_table_csv(s, {"restart", "iteration", "residual"}, rows); }));
  if (out.dump()) {
    out.add("best_psi.csv", to_text([&](std::ostream& s) { write_field_csv(s, r.best_psi, "psi"); }));
  }
  return j;
}

// ---- tangency --------------------------------------------------------------

ordered_json cmd_tangency(const ExperimentConfig& c, const ChartPtr& chart, Output& out, bool& pass) {
  require_torus(chart, "tangency");
  if (!has_field(c)) throw ConfigError("tangency needs field.x1/x2 or field.psi");
  const FieldInput f = build_field(c, chart);
  TangencyOptions o;
  o.t_max = c.number("tangency.t_max", o.t_max);
  o.n_samples = c.integer("tangency.samples", o.n_samples);
  o.decades = c.number("tangency.decades", o.decades);
  o.roundoff = c.number("tangency.roundoff", o.roundoff);
  o.steps_per_unit_time = c.integer("tangency.steps_per_unit_time", o.steps_per_unit_time);
  const double exp_tol = c.number("tangency.exponent_tol", 0.15);
  const double taylor_tol = c.number("tangency.taylor_tol", 0.05);
  if (!(o.t_max > 0) || o.n_samples < 2 || !(o.decades > 0)) {
    throw ConfigError("tangency needs t_max > 0, samples >= 2, decades > 0");
  }

  const TangencyFit fit = tangency_order(f.x, o);
  ResidualReport r("tangency");
  if (fit.outcome == "fit") {
    r.add("exponent_gap", NormKind::Sup, std::abs(fit.fitted_exponent - 2.0), exp_tol,
          "|p - 2| for the log-log slope p of d(t) = distance(Euler, Burgers) at small t");
    if (fit.pressure_gradient_norm > 0) {
      const double ratio = fit.d2_at_zero * fit.d2_at_zero /
                           (fit.pressure_gradient_norm * fit.pressure_gradient_norm);
      r.add("taylor_gap", NormKind::L2, std::abs(ratio - 1.0), taylor_tol,
            "|d''(0)^2 / ||grad p||_L2^2 - 1|, d''(0) from d(t)/t^2 = c0 + c1 t");
    }
  } else {
    const double dmax = *std::max_element(fit.distances.begin(), fit.distances.end());
    r.add("max_distance", NormKind::L2, dmax, o.roundoff, "max over samples of d(t) (exact coincidence)");
  }
  pass = r.all_pass();
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < fit.t_samples.size(); ++k) rows.push_back({fit.t_samples[k], fit.distances[k]});
  out.add("tangency_series.csv", to_text([&](std::ostream& s) { write_table_csv(s, {"t", "distance"}, rows); }));

  ordered_json j;
  ordered_json fj;
  fj["outcome"] = fit.outcome;
  fj["fitted_exponent"] = json_number(fit.fitted_exponent);
  fj["fit_residual"] = json_number(fit.fit_residual);
  fj["fit_points"] = fit.fit_points;
  fj["d2_at_zero"] = json_number(fit.d2_at_zero);
  fj["pressure_gradient_norm"] = json_number(fit.pressure_gradient_norm);
  ordered_json ts = ordered_json::array(), ds = ordered_json::array();
  for (double t : fit.t_samples) ts.push_back(json_number(t));
  for (double d : fit.distances) ds.push_back(json_number(d));
  fj["t_samples"] = ts;
  fj["distances"] = ds;
  j["fit"] = fj;
  j["definitions"] = {{"distance", "L2 distance between the Euler and Burgers maps issued from X0"},
                      {"fitted_exponent", "slope of log d against log t over the smallest valid decade"}};
  j["reports"] = reports_json({r});
  return j;
}

// ---- transport -------------------------------------------------------------

struct TransportInput {
  Density m, n;
  double tol = 1e-10;
  int max_iters = 30;
};

TransportInput transport_input(const ExperimentConfig& c, const ChartPtr& chart) {
  TransportInput in;
  in.tol = c.number("transport.tol", in.tol);
  in.max_iters = c.integer("transport.max_iters", in.max_iters);
  if (!(in.tol > 0) || in.max_iters < 1) throw ConfigError("transport needs tol > 0 and max_iters >= 1");
  auto density = [&](const ScalarField& f, const std::string& what) {
    try {
      return Density::normalized(f);
    } catch (const InvalidArgument& e) {
      throw ConfigError(what + ": " + e.what());
    }
  };
  in.m = density(sample_expr(chart, parse_expr(c, "transport.source", "1")), "transport.source");
  const int given = c.has("transport.target") + c.has("transport.target_csv");
  if (given > 1) throw ConfigError("give transport.target or transport.target_csv, not both");
  if (c.has("transport.target_csv")) {
    std::ifstream f(c.text("transport.target_csv"));
    if (!f) throw ConfigError("cannot read " + c.text("transport.target_csv"));
    try {
      in.n = density(read_field_csv(f, chart), "transport.target_csv");
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("transport.target_csv: ") + e.what());
    }
  } else if (c.has("transport.target")) {
    in.n = density(sample_expr(chart, parse_expr(c, "transport.target", "1")), "transport.target");
  } else {
    const std::string eps = format_double(c.number("transport.epsilon", 0.2));
    const std::string pair = c.text("transport.pair", "1d");
    std::string text;
    if (pair == "1d") {
      text = "1 + " + eps + "*cos(u)";
    } else if (pair == "product") {
      text = "(1 + " + eps + "*cos(u))*(1 + " + eps + "*cos(v))";
    } else {
      throw ConfigError("transport.pair must be 1d or product");
    }
    in.n = density(sample_expr(chart, Expression::parse(text, kFieldVars)), "built-in target");
  }
  double lo = INFINITY, hi = 0;
  for (std::size_t p = 0; p < chart->size(); ++p) {
    lo = std::min(lo, in.n[p] / in.m[p]);
    hi = std::max(hi, in.n[p] / in.m[p]);
  }
  if (lo < 0.5 || hi > 2.0) {
    throw ConfigError("density ratio n/m leaves [0.5, 2]: outside the perturbative regime of the solver");
  }
  return in;
}

double transport_cost(const TransportPotential& phi, const Density& m) {
  const VectorField g = grad(phi.u);
  const auto& w = m.chart()->area_weights();
  double s = 0;
  for (std::size_t p = 0; p < w.size(); ++p) s += w[p] * m[p] * (g.x1()[p] * g.x1()[p] + g.x2()[p] * g.x2()[p]);
  return s;
}

ordered_json solution_json(const TransportSolution& s, const TransportInput& in, double final_residual) {
  ordered_json j;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  ordered_json h = ordered_json::array();
  for (double r : s.residual_history) h.push_back(json_number(r));
  j["residual_history"] = h;
  j["halvings"] = s.halvings;
  j["final_residual"] = json_number(final_residual);
  j["cost"] = json_number(transport_cost(s.potential, in.m));
  j["tol"] = json_number(in.tol);
  j["max_iters"] = in.max_iters;
  if (!s.message.empty()) j["message"] = s.message;
  return j;
}

ordered_json cmd_transport(const ExperimentConfig& c, const ChartPtr& chart, Output& out, bool& pass) {
  require_torus(chart, "transport");
  const TransportInput in = transport_input(c, chart);
  const TransportSolution s = solve_transport(in.m, in.n, in.tol, in.max_iters);
  double final_residual = s.residual_history.back();
  ResidualReport r("transport");
  if (s.potential.convex()) {
    final_residual = sup_norm(transport_residual(s.potential, in.m, in.n));
  }
  r.add("residual", NormKind::Sup, final_residual, in.tol,
        "sup |det(I + D^2 u) - m(x) / n(x + grad u(x))| at the returned potential");
  r.add("convexity_violation", NormKind::Sup, s.potential.convex() ? 0.0 : 1.0, 0.0,
        "1 when I + D^2 u fails det > 0 and trace > 0 at some node, else 0");
  r.add_metric("newton_iterations", s.iterations);
  pass = s.converged && r.all_pass();

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < s.residual_history.size(); ++k) {
    rows.push_back({static_cast<double>(k), s.residual_history[k]});
  }
  out.add("transport_history.csv",
          to_text([&](std::ostream& o) { write_table_csv(o, {"iteration", "residual"}, rows); }));
  if (out.dump()) {
    out.add("potential.csv", to_text([&](std::ostream& o) { write_field_csv(o, s.potential.u, "u"); }));
    out.add("source.csv", to_text([&](std::ostream& o) { write_field_csv(o, in.m.field(), "m"); }));
    out.add("target.csv", to_text([&](std::ostream& o) { write_field_csv(o, in.n.field(), "n"); }));
  }
  ordered_json j;
  j["solution"] = solution_json(s, in, final_residual);
  j["definitions"] = {{"cost", "integral |grad u|^2 m dA, the squared transport distance"},
                      {"residual_history", "sup residual per Newton iterate, starting from u = 0"},
                      {"halvings", "step halvings applied at each Newton iteration"}};
  j["reports"] = reports_json({r});
  return j;
}

// ---- submersion ------------------------------------------------------------

ordered_json cmd_submersion(const ExperimentConfig& c, const ChartPtr& chart, Output& out, bool& pass) {
  require_torus(chart, "submersion");
  const int times = c.integer("submersion.times", 5);
  const double tol = c.number("submersion.tol", 1e-6);
  if (times < 1 || !(tol > 0)) throw ConfigError("submersion needs times >= 1 and tol > 0");
  ordered_json j;
  TransportPotential phi;
  Density m;
  if (c.has("submersion.potential")) {
    phi.u = sample_expr(chart, parse_expr(c, "submersion.potential", "0"));
    try {
      m = Density::normalized(sample_expr(chart, parse_expr(c, "transport.source", "1")));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("transport.source: ") + e.what());
    }
    if (!phi.convex()) throw ConfigError("submersion.potential violates the convexity guard");
  } else {
    const TransportInput in = transport_input(c, chart);
    const TransportSolution s = solve_transport(in.m, in.n, in.tol, in.max_iters);
    const double final_residual = s.potential.convex() ? sup_norm(transport_residual(s.potential, in.m, in.n))
                                                       : s.residual_history.back();
    j["solution"] = solution_json(s, in, final_residual);
    if (!s.converged) {
      pass = false;
      j["reports"] = ordered_json::array();
      return j;
    }
    phi = s.potential;
    m = in.m;
  }
  if (out.dump()) out.add("potential.csv", to_text([&](std::ostream& o) { write_field_csv(o, phi.u, "u"); }));
  std::vector<ResidualReport> reports{submersion_check(phi, m, times, tol)};
  if (has_field(c)) {
    const FieldInput f = build_field(c, chart);
    reports.push_back(vertical_departure_rate(f.x, c.number("submersion.dt", 1e-3), tol));
  }
  pass = all_pass(reports);
  j["reports"] = reports_json(reports);
  return j;
}

// ---- surface-info ----------------------------------------------------------

ordered_json cmd_surface_info(const ExperimentConfig&, const ChartPtr& chart, Output& out, bool& pass) {
  const auto& c = *chart;
  auto range = [](const std::vector<double>& a) {
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    return ordered_json{json_number(*lo), json_number(*hi)};
  };
  ordered_json j;
  j["area"] = json_number(c.area());
  j["curvature_range"] = range(c.curvature());
  j["sqrt_det_g_range"] = range(c.sqrt_det_g());
  j["gauss_bonnet_sum"] = json_number(gauss_bonnet_sum(c));
  ordered_json b = ordered_json::array();
  for (const auto& e : c.boundary()) {
    b.push_back({{"edge", e.which_edge == Edge::UMin ? "umin" : "umax"}, {"kg_range", range(e.kg)}});
  }
  j["boundary"] = b;
  j["definitions"] = {{"gauss_bonnet_sum", "integral K dA + boundary integral kg ds"},
                      {"kg", "geodesic curvature of the boundary circle, positive when convex"}};
  out.add("chart.csv", to_text([&](std::ostream& s) { dump_chart(s, c); }));
  pass = true;
  return j;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunOutcome run_experiment(const std::string& command, const ExperimentConfig& config) {
  using Handler = ordered_json (*)(const ExperimentConfig&, const ChartPtr&, Output&, bool&);
  Handler h = nullptr;
  if (command == "verify") h = cmd_verify;
  if (command == "search") h = cmd_search;
  if (command == "tangency") h = cmd_tangency;
  if (command == "transport") h = cmd_transport;
  if (command == "submersion") h = cmd_submersion;
  if (command == "surface-info") h = cmd_surface_info;
  if (!h) throw ConfigError("unknown command '" + command + "'");

  Output out(config);
  const ChartPtr chart = build_chart(config);
  ordered_json report;
  report["toolkit"] = "geohydro";
  report["version"] = kVersion;
  report["command"] = command;
  if (config.has("experiment")) report["experiment"] = config.text("experiment");
  report["timestamp"] = utc_timestamp();
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : config.values()) echo[k] = v;
  report["config"] = echo;
  report["chart"] = chart_json(*chart);

  bool pass = false;
  ordered_json body;
  try {
    body = h(config, chart, out, pass);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument&) {
    throw;
  } catch (const Error& e) {
    // Solver, caustic and precondition failures are results, not usage errors.
    body = ordered_json::object();
    body["error"] = e.what();
    pass = false;
  }
  report["pass"] = pass;
  for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();

  RunOutcome o;
  o.exit_code = pass ? kPass : kCheckFailure;
  report["exit_code"] = o.exit_code;
  std::string name = command;
  std::replace(name.begin(), name.end(), '-', '_');
  out.add(name + ".json", report.dump(2) + "\n");
  o.files = out.write();
  o.report = std::move(report);
  return o;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"geohydro: asymptotic directions, Burgers flows and transport on surfaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::string output;
    std::string seed;
    std::string tol, max_iters, epsilon, times, restarts;
    bool dump = false;
  } flags;

  const std::map<std::string, std::string> help = {
      {"verify", "asymptotic, Monge-Ampere, boundary, kg and max-point residuals of a field"},
      {"search", "multi-start search for solutions of the Monge-Ampere equation"},
      {"tangency", "order of tangency of the Euler and Burgers geodesics from X0"},
      {"transport", "solve the transport Monge-Ampere equation on the torus"},
      {"submersion", "displacement interpolation versus Burgers flow, and vertical departure rate"},
      {"surface-info", "chart summary and CSV dump"}};
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("-c,--config", flags.config, "key = value config file");
    sub->add_option("--set", flags.sets, "override a config key (key=value), repeatable");
    sub->add_option("-o,--output", flags.output, "output directory");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_flag("--dump", flags.dump, "also write full field CSVs");
    if (name == "verify") sub->add_option("--tol", flags.tol, "tolerance (sets tol.flat and tol.curved)");
    if (name == "search") {
      sub->add_option("--restarts", flags.restarts, "search.restarts");
      sub->add_option("--max-iters", flags.max_iters, "search.max_iterations");
    }
    if (name == "transport" || name == "submersion") {
      sub->add_option("--tol", flags.tol, name == "transport" ? "transport.tol" : "submersion.tol");
      sub->add_option("--max-iters", flags.max_iters, "transport.max_iters");
      sub->add_option("--epsilon", flags.epsilon, "transport.epsilon");
    }
    if (name == "submersion") sub->add_option("--times", flags.times, "submersion.times");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg;
    if (!flags.config.empty()) cfg = ExperimentConfig::load(flags.config);
    for (const auto& s : flags.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!flags.output.empty()) cfg.set("output", flags.output);
    if (!flags.seed.empty()) cfg.set("seed", flags.seed);
    if (flags.dump) cfg.set("dump", "true");
    if (!flags.restarts.empty()) cfg.set("search.restarts", flags.restarts);
    if (!flags.epsilon.empty()) cfg.set("transport.epsilon", flags.epsilon);
    if (!flags.times.empty()) cfg.set("submersion.times", flags.times);
    if (!flags.max_iters.empty()) cfg.set(command == "search" ? "search.max_iterations" : "transport.max_iters",
                                          flags.max_iters);
    if (!flags.tol.empty()) {
      if (command == "verify") {
        cfg.set("tol.flat", flags.tol);
        cfg.set("tol.curved", flags.tol);
      } else {
        cfg.set(command == "transport" ? "transport.tol" : "submersion.tol", flags.tol);
      }
    }

    const RunOutcome o = run_experiment(command, cfg);
    out << command << ": " << (o.exit_code == kPass ? "pass" : "FAIL") << '\n';
    if (o.report.contains("error")) out << "  error: " << o.report["error"].get<std::string>() << '\n';
    if (o.report.contains("reports")) {
      for (const auto& r : o.report["reports"]) {
        for (const auto& e : r["entries"]) {
          out << "  " << r["title"].get<std::string>() << '.' << e["name"].get<std::string>() << " = "
              << e["value"].dump() << " (tol " << e["tolerance"].dump() << ") "
              << (e["pass"].get<bool>() ? "ok" : "FAIL") << '\n';
        }
      }
    }
    for (const auto& f : o.files) out << "  wrote " << (fs::path(cfg.text("output", ".")) / f).string() << '\n';
    return o.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kCheckFailure;
  }
}

}  // namespace geohydro::cli
