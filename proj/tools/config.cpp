// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geohydro/expression.hpp"

namespace geohydro::cli {

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"experiment", "free-form experiment name, echoed in reports"},
      {"output", "output directory (default .)"},
      {"seed", "random seed; required by search"},
      {"dump", "write full field CSVs (true/false)"},
      {"chart.file", "file holding chart.* keys; keys set here take precedence"},
      {"chart.kind", "torus | sphere_band | revolution"},
      {"chart.lx", "torus length in u (default 2*pi)"},
      {"chart.ly", "torus length in v (default 2*pi)"},
      {"chart.nu", "samples in u"},
      {"chart.nv", "samples in v"},
      {"chart.theta_min", "sphere band lower polar angle"},
      {"chart.theta_max", "sphere band upper polar angle"},
      {"chart.profile", "revolution profile rho(t) as an expression in t"},
      {"chart.profile_table", "revolution profile samples at the nu nodes"},
      {"chart.t_min", "revolution parameter range start"},
      {"chart.t_max", "revolution parameter range end"},
      {"chart.t_periodic", "revolution profile periodic in t (closed surface)"},
      {"field.x1", "u component of X, expression in u, v"},
      {"field.x2", "v component of X, expression in u, v"},
      {"field.psi", "stream function; X = J grad psi (overrides x1, x2)"},
      {"checks", "verify: asymptotic ma equivalence boundary kg maxpoint | all"},
      {"tol.flat", "tolerance on the flat torus (default 1e-8)"},
      {"tol.curved", "tolerance on curved charts (default 1e-4)"},
      {"convention", "Hessian in the Monge-Ampere residual: covariant | coordinate"},
      {"search.restarts", "multi-start count (default 20)"},
      {"search.band_limit", "modes per direction (default 8)"},
      {"search.max_iterations", "Levenberg-Marquardt iterations per restart"},
      {"search.margin", "band fraction excluded at each edge (default 0.1)"},
      {"search.threshold", "floor below which solutions are reported to exist (default 1e-8)"},
      {"tangency.t_max", "largest sample time"},
      {"tangency.samples", "number of log-spaced sample times"},
      {"tangency.decades", "decades spanned below t_max"},
      {"tangency.roundoff", "distances at or below are round-off"},
      {"tangency.steps_per_unit_time", "Euler steps per unit time (0: CFL 0.5)"},
      {"tangency.exponent_tol", "allowed |exponent - 2| (default 0.15)"},
      {"tangency.taylor_tol", "allowed relative gap between d''(0)^2 and |grad p|^2 (default 0.05)"},
      {"transport.source", "source density m (expression in u, v; default 1)"},
      {"transport.target", "target density n (expression in u, v)"},
      {"transport.target_csv", "target density as a u,v,value CSV grid"},
      {"transport.epsilon", "perturbation for the built-in pairs (default 0.2)"},
      {"transport.pair", "built-in target when none is given: 1d | product"},
      {"transport.tol", "Newton tolerance on the sup residual (default 1e-10)"},
      {"transport.max_iters", "Newton iteration cap (default 30)"},
      {"submersion.times", "interpolation times k/n, k = 1..n (default 5)"},
      {"submersion.potential", "transport potential u (skips the solve)"},
      {"submersion.dt", "time step of the vertical departure rate (default 1e-3)"},
      {"submersion.tol", "tolerance of the submersion residuals (default 1e-6)"},
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_known(const std::string& key) {
  const auto& k = known_keys();
  return std::any_of(k.begin(), k.end(), [&](const KeyInfo& i) { return key == i.key; });
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (c.has(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
    try {
      c.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  ExperimentConfig c = parse(ss.str());
  if (c.has("chart.file")) {
    const std::filesystem::path p = c.text("chart.file");
    if (p.is_relative()) c.set("chart.file", (path.parent_path() / p).lexically_normal().string());
  }
  return c;
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!is_known(key)) throw ConfigError("unknown key '" + key + "'");
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError("empty value for " + key);
  if (v.find_first_of("#\n") != std::string::npos) {
    throw ConfigError("value of " + key + " may not contain '#' or a newline");
  }
  values_[key] = v;
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double x;
  try {
    x = evaluate_constant(it->second);
  } catch (const Error& e) {
    throw ConfigError(key + ": " + e.what());
  }
  if (!std::isfinite(x)) throw ConfigError(key + " is not finite");
  return x;
}

int ExperimentConfig::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double x = number(key, 0.0);
  if (x != std::round(x) || std::abs(x) > 1e9) throw ConfigError(key + " must be an integer");
  return static_cast<int>(x);
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + " must be true or false");
}

std::uint64_t ExperimentConfig::seed() const {
  if (!has("seed")) throw ConfigError("this experiment is stochastic: set seed explicitly");
  const std::string v = text("seed");
  std::uint64_t s = 0;
  std::size_t used = 0;
  try {
    s = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.front() == '-') throw ConfigError("seed must be a non-negative integer");
  return s;
}

std::vector<std::string> ExperimentConfig::list(const std::string& key) const {
  std::string v = text(key);
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace geohydro::cli
