#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "satwave/eps_solver.hpp"
#include "satwave/errors.hpp"
#include "satwave/ground_state.hpp"
#include "satwave/penalization.hpp"
#include "satwave/scalar_field.hpp"
#include "satwave/sigma.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

/// Flat key-value run configuration with dotted section names:
///
///   # comment
///   solver.N = 2
///   fields.V.kind = quadratic-well
///   fields.V.params = 0.5, 0.15, 0.0, 0.0
///
/// Values are scalars, comma-separated lists, or semicolon-separated point
/// lists. Field parameter layouts (after `kind`):
///   constant            value
///   quadratic-well      base, curvature, center[N]
///   gaussian-bump-sum   base, then per bump: amplitude, width, center[N]
///   product-composite   base1, curvature, p[N], base2, amplitude, width, q[N]
class RunConfig {
 public:
  static RunConfig from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key", lineno);
      if (cfg.kv_.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
      cfg.kv_[key] = value;
      cfg.lines_[key] = lineno;
    }
    return cfg;
  }

  static RunConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  int line_of(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? -1 : it->second;
  }

  std::string get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }
  double get_double(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
  }

  int get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError("expected an integer for '" + key + "'", line_of(key));
    return i;
  }
  int get_int(const std::string& key, int def) const { return has(key) ? get_int(key) : def; }

  bool get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    std::string v = get_string(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected a boolean for '" + key + "'", line_of(key));
  }

  std::vector<double> get_doubles(const std::string& key) const {
    return parse_list(key, get_string(key));
  }
  std::vector<double> get_doubles(const std::string& key, std::vector<double> def) const {
    return has(key) ? get_doubles(key) : std::move(def);
  }

  /// Semicolon-separated list of comma-separated points.
  std::vector<Point> get_points(const std::string& key, int dim) const {
    std::vector<Point> out;
    std::istringstream in(get_string(key));
    std::string part;
    while (std::getline(in, part, ';')) {
      const Point p = parse_list(key, part);
      if (static_cast<int>(p.size()) != dim)
        throw ConfigError("point in '" + key + "' has " + std::to_string(p.size()) +
                              " coordinates, expected " + std::to_string(dim),
                          line_of(key));
      out.push_back(p);
    }
    if (out.empty()) throw ConfigError("no points in '" + key + "'", line_of(key));
    return out;
  }

  Point get_point(const std::string& key, int dim) const {
    const auto pts = get_points(key, dim);
    if (pts.size() != 1) throw ConfigError("expected a single point for '" + key + "'", line_of(key));
    return pts.front();
  }

  // ---- structured views -------------------------------------------------

  int dim() const {
    const int n = get_int("solver.N");
    if (n < 2) throw ConfigError("solver.N must be >= 2", line_of("solver.N"));
    return n;
  }

  unsigned long long seed() const {
    return static_cast<unsigned long long>(get_double("seed", 1.0));
  }

  ScalarField field(const std::string& name) const {
    const std::string base = "fields." + name + ".";
    const std::string kind = get_string(base + "kind");
    const double floor = get_double(base + "floor");
    const std::vector<double> par = get_doubles(base + "params");
    const int N = dim();
    const int line = line_of(base + "params");
    auto need = [&](std::size_t n) {
      if (par.size() != n)
        throw ConfigError(base + "params: expected " + std::to_string(n) + " values for kind '" + kind +
                              "', got " + std::to_string(par.size()),
                          line);
    };
    if (kind == "constant") {
      need(1);
      return ScalarField::constant(N, par[0], floor);
    }
    if (kind == "quadratic-well") {
      need(2 + N);
      return ScalarField::quadratic_well(N, par[0], par[1], Point(par.begin() + 2, par.end()), floor);
    }
    if (kind == "gaussian-bump-sum") {
      if (par.size() < 1 || (par.size() - 1) % (2 + N) != 0)
        throw ConfigError(base + "params: expected base then groups of (amplitude, width, center[N])", line);
      std::vector<GaussianBump> bumps;
      for (std::size_t i = 1; i < par.size(); i += 2 + N)
        bumps.push_back({par[i], par[i + 1], Point(par.begin() + i + 2, par.begin() + i + 2 + N)});
      return ScalarField::gaussian_bumps(N, par[0], std::move(bumps), floor);
    }
    if (kind == "product-composite") {
      need(5 + 2 * N);
      return ScalarField::product_composite(N, par[0], par[1], Point(par.begin() + 2, par.begin() + 2 + N),
                                            par[2 + N], par[3 + N], par[4 + N],
                                            Point(par.begin() + 5 + N, par.end()), floor);
    }
    throw ConfigError("unknown field kind '" + kind + "'", line_of(base + "kind"));
  }

  PenalizedNonlinearity penalization() const {
    const int N = dim();
    const Point z = get_point("ball.z", N);
    const double r = get_double("ball.r");
    const double r_inner = get_double("ball.r_inner", 0.8 * r);
    const double nu = get_double("penalization.nu", 0.25);
    const double mu = get_double("fields.V.floor");
    try {
      return PenalizedNonlinearity(z, r_inner, r, nu, mu);
    } catch (const Error& e) {
      throw ConfigError(e.what(), line_of("ball.r"));
    }
  }

  std::vector<double> eps_list() const {
    const std::vector<double> eps = get_doubles("solver.eps_list");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (eps[i] <= 0.0) throw ConfigError("solver.eps_list entries must be positive", line_of("solver.eps_list"));
      if (i > 0 && eps[i] >= eps[i - 1])
        throw ConfigError("solver.eps_list must be strictly decreasing", line_of("solver.eps_list"));
    }
    if (eps.empty()) throw ConfigError("solver.eps_list is empty", line_of("solver.eps_list"));
    return eps;
  }

  ShootingOptions shooting() const {
    ShootingOptions o;
    o.samples = get_int("groundstate.samples", o.samples);
    o.radius_factor = get_double("groundstate.radius_factor", o.radius_factor);
    o.amp_rel_tol = get_double("groundstate.amp_rel_tol", o.amp_rel_tol);
    o.tail_tol = get_double("groundstate.tail_tol", o.tail_tol);
    return o;
  }

  SigmaOptions sigma_options() const {
    SigmaOptions o;
    o.shooting = shooting();
    o.fd_step = get_double("sigma_map.fd_step", o.fd_step);
    return o;
  }

  /// Base problem for solve-eps / sweep; epsilon comes from the eps list.
  EpsProblem eps_problem() const {
    const int N = dim();
    const ScalarField V = field("V");
    const ScalarField s = field("s");
    const PenalizedNonlinearity pen = penalization();
    const double extent = get_double("solver.domain");
    const double ppe = get_double("solver.points_per_eps", 16.0);
    if (ppe < 4.0) throw ConfigError("solver.points_per_eps must be >= 4", line_of("solver.points_per_eps"));
    bool radial;
    const std::string mode = get_string("solver.radial", "auto");
    const bool radial_possible = V.radial_about(pen.center()) && s.radial_about(pen.center());
    if (mode == "auto") radial = radial_possible;
    else if (mode == "true" || mode == "1") radial = true;
    else if (mode == "false" || mode == "0") radial = false;
    else throw ConfigError("solver.radial must be auto/true/false", line_of("solver.radial"));
    EpsProblem p{1.0, N, radial, extent, 4, V, s, pen};
    p.points_per_eps = ppe;
    p.newton_tol = get_double("solver.newton_tol", p.newton_tol);
    return p;
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.begin(), e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
  }

  double parse_double(const std::string& key, const std::string& text) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + text + "' for '" + key + "'", line_of(key));
    }
  }

  std::vector<double> parse_list(const std::string& key, const std::string& text) const {
    std::vector<double> out;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
      const std::string t = trim(part);
      if (t.empty()) throw ConfigError("empty list entry in '" + key + "'", line_of(key));
      out.push_back(parse_double(key, t));
    }
    return out;
  }

  std::map<std::string, std::string> kv_;
  std::map<std::string, int> lines_;
};

}  // namespace satwave
