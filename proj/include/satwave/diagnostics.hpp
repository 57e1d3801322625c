#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "satwave/eps_solver.hpp"
#include "satwave/errors.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

struct LocalMaximum {
  Point location;  ///< sub-grid refined by per-axis quadratic interpolation
  double value = 0.0;
};

namespace detail {

inline double quadratic_offset(double um, double u0, double up) {
  const double denom = um - 2.0 * u0 + up;
  if (denom >= 0.0) return 0.0;  // not locally concave, keep the node
  return 0.5 * (um - up) / denom;
}

}  // namespace detail

/// All strict discrete local maxima above `floor_frac` of the global
/// maximum, the global maximum first, each refined by quadratic
/// interpolation of the neighboring values.
inline std::vector<LocalMaximum> locate_maxima(const GridSolution& sol, const Point& center,
                                               double floor_frac = 0.1, double trivial_tol = 1e-8) {
  const double gmax = sol.max_value();
  if (!(gmax > trivial_tol)) throw TrivialSolutionError("solution maximum below the trivial threshold");
  const double floor = floor_frac * gmax;
  const double h = sol.spacing();
  std::vector<LocalMaximum> out;

  if (sol.radial) {
    const auto& u = sol.values;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      if (u[i] < floor) continue;
      bool is_max;
      double off = 0.0;
      if (i == 0) {
        is_max = u[0] > u[1];  // symmetric across r = 0
      } else {
        is_max = u[i] > u[i - 1] && u[i] > u[i + 1];
        if (is_max) off = detail::quadratic_offset(u[i - 1], u[i], u[i + 1]);
      }
      if (!is_max) continue;
      Point x = center;
      x[0] += h * (static_cast<double>(i) + off);
      out.push_back({x, u[i]});
    }
  } else {
    const std::size_t npa = sol.nodes_per_axis();
    std::vector<std::size_t> stride(sol.dim, 1);
    for (int j = sol.dim - 2; j >= 0; --j) stride[j] = stride[j + 1] * npa;
    for (std::size_t f = 0; f < sol.values.size(); ++f) {
      const double v = sol.values[f];
      if (v < floor) continue;
      std::size_t rem = f;
      bool boundary = false;
      for (int j = 0; j < sol.dim; ++j) {
        const std::size_t k = rem / stride[j];
        rem %= stride[j];
        if (k == 0 || k + 1 == npa) boundary = true;
      }
      if (boundary) continue;
      bool is_max = true;
      for (int j = 0; j < sol.dim && is_max; ++j)
        is_max = v > sol.values[f + stride[j]] && v > sol.values[f - stride[j]];
      if (!is_max) continue;
      Point x = sol.node_point(f, center);
      for (int j = 0; j < sol.dim; ++j)
        x[j] += h * detail::quadratic_offset(sol.values[f - stride[j]], v, sol.values[f + stride[j]]);
      out.push_back({x, v});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LocalMaximum& a, const LocalMaximum& b) { return a.value > b.value; });
  return out;
}

struct DecayFit {
  double mu1 = 0.0;       ///< amplitude prefactor exp(intercept)
  double mu2 = 0.0;       ///< decay rate in the scaled variable |x - x_eps| / eps
  double r_squared = 0.0;
  int n_points = 0;
};

/// Least-squares fit of ln u against |x - x_eps|/eps on the annulus
/// 2 eps <= |x - x_eps| <= 6 eps.
inline DecayFit decay_fit(const GridSolution& sol, const Point& x_eps, double eps, const Point& center) {
  const double lo = 2.0 * eps, hi = 6.0 * eps;
  std::vector<double> rho, lnu;

  if (sol.radial) {
    const double r_eps = distance(x_eps, center);
    if (r_eps + hi > sol.extent) throw FitRangeEmptyError("fit annulus leaves the domain");
    const double h = sol.spacing();
    for (std::size_t i = 0; i < sol.values.size(); ++i) {
      const double d = std::abs(h * static_cast<double>(i) - r_eps);
      if (d < lo || d > hi) continue;
      if (!(sol.values[i] > 1e-300)) continue;
      rho.push_back(d / eps);
      lnu.push_back(std::log(sol.values[i]));
    }
  } else {
    for (double c : x_eps)
      if (std::abs(c) + hi > sol.extent) throw FitRangeEmptyError("fit annulus leaves the domain");
    for (std::size_t f = 0; f < sol.values.size(); ++f) {
      const Point x = sol.node_point(f, center);
      const double d = distance(x, x_eps);
      if (d < lo || d > hi) continue;
      if (!(sol.values[f] > 1e-300)) continue;
      rho.push_back(d / eps);
      lnu.push_back(std::log(sol.values[f]));
    }
  }
  if (rho.size() < 5) throw FitRangeEmptyError("not enough usable points in the fit annulus");

  const double n = static_cast<double>(rho.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    sx += rho[i];
    sy += lnu[i];
    sxx += rho[i] * rho[i];
    sxy += rho[i] * lnu[i];
    syy += lnu[i] * lnu[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double e = lnu[i] - (intercept + slope * rho[i]);
    ss_res += e * e;
    const double t = lnu[i] - mean_y;
    ss_tot += t * t;
  }
  DecayFit fit;
  fit.mu1 = std::exp(intercept);
  fit.mu2 = -slope;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.n_points = static_cast<int>(rho.size());
  return fit;
}

struct ConcentrationRow {
  double epsilon = 0.0;
  Point x_eps;
  double dist_to_center = 0.0;
  int n_local_maxima = 0;
  double V_at_max = 0.0, s_at_max = 0.0;
  double mu1 = 0.0, mu2 = 0.0, fit_r2 = 0.0;
  double rescaled_energy = 0.0;
  double sigma_at_limit = 0.0;
  bool pen_active = false;
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  // qualitative trend flags across the sweep (violations flagged, not fatal)
  bool dist_nonincreasing = true;
  bool V_trend = true;       ///< V(x_eps) - V(z) nonincreasing
  bool s_trend = true;       ///< s(x_eps) - s(z) nonincreasing
  bool energy_trend = true;  ///< |rescaled energy - Sigma(z)| nonincreasing
};

/// Per-eps concentration observables for a sweep, compared against the
/// frozen-problem prediction Sigma(z) at the ball center.
inline ConcentrationReport concentration_report(const std::vector<GridSolution>& sweep,
                                                const EpsProblem& base, double sigma_z) {
  ConcentrationReport rep;
  const Point& z = base.pen.center();
  const double V0 = base.V(z), s0 = base.s(z);
  for (const auto& sol : sweep) {
    ConcentrationRow row;
    row.epsilon = sol.epsilon;
    row.rescaled_energy = sol.rescaled_energy;
    row.sigma_at_limit = sigma_z;
    const auto maxima = locate_maxima(sol, z);
    row.n_local_maxima = static_cast<int>(maxima.size());
    row.x_eps = maxima.front().location;
    row.dist_to_center = distance(row.x_eps, z);
    row.V_at_max = base.V(row.x_eps);
    row.s_at_max = base.s(row.x_eps);
    EpsProblem p = base.with_epsilon(sol.epsilon);
    p.intervals = sol.intervals;
    row.pen_active = penalization_active(sol, p);
    try {
      const DecayFit fit = decay_fit(sol, row.x_eps, sol.epsilon, z);
      row.mu1 = fit.mu1;
      row.mu2 = fit.mu2;
      row.fit_r2 = fit.r_squared;
    } catch (const FitRangeEmptyError&) {
      row.mu1 = row.mu2 = row.fit_r2 = std::numeric_limits<double>::quiet_NaN();
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    const double slack = 1e-9;
    if (b.dist_to_center > a.dist_to_center + slack * (1.0 + a.dist_to_center))
      rep.dist_nonincreasing = false;
    if (b.V_at_max - V0 > a.V_at_max - V0 + slack * (1.0 + std::abs(a.V_at_max - V0))) rep.V_trend = false;
    if (b.s_at_max - s0 > a.s_at_max - s0 + slack * (1.0 + std::abs(a.s_at_max - s0))) rep.s_trend = false;
    if (std::abs(b.rescaled_energy - sigma_z) >
        std::abs(a.rescaled_energy - sigma_z) + slack * (1.0 + std::abs(a.rescaled_energy - sigma_z)))
      rep.energy_trend = false;
  }
  return rep;
}

}  // namespace satwave
