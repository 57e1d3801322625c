#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "satwave/errors.hpp"
#include "satwave/saturable.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

/// Penalized nonlinearity g = chi * f + (1 - chi) * fbar built from a smooth
/// radial cutoff chi (1 on B(z,r'), 0 outside B(z,r)) and the truncation
/// fbar(x,t) = min{f(x,t), nu*mu*t} for t >= 0, 0 for t < 0.
/// mu is the lower bound of the potential V, nu is fixed in (0, 1/2).
class PenalizedNonlinearity {
 public:
  PenalizedNonlinearity(Point center, double r_inner, double r_outer, double nu, double mu)
      : center_(std::move(center)), r_inner_(r_inner), r_outer_(r_outer), nu_(nu), mu_(mu) {
    if (!(r_inner > 0.0 && r_inner < r_outer)) throw Error("penalization radii must satisfy 0 < r' < r");
    if (!(nu > 0.0 && nu < 0.5)) throw Error("penalization nu must lie in (0, 1/2)");
    if (mu <= 0.0) throw Error("penalization mu must be positive");
  }

  const Point& center() const { return center_; }
  double inner_radius() const { return r_inner_; }
  double outer_radius() const { return r_outer_; }
  double nu() const { return nu_; }
  double mu() const { return mu_; }
  double level() const { return nu_ * mu_; }

  /// C^2 cutoff: 1 on B(z,r'), 0 outside closure of B(z,r), quintic in between.
  double chi(const Point& x) const { return chi_radial(distance(x, center_)); }

  double chi_radial(double rho) const {
    if (rho <= r_inner_) return 1.0;
    if (rho >= r_outer_) return 0.0;
    const double t = (rho - r_inner_) / (r_outer_ - r_inner_);
    return 1.0 - t * t * t * (10.0 + t * (6.0 * t - 15.0));
  }

  /// Amplitude above which the truncation branch nu*mu*t is the smaller one;
  /// +infinity when f stays below nu*mu*t for all t (nu*mu*s >= 1).
  double switch_amplitude(double s_val) const {
    const double d = 1.0 - level() * s_val;
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(level() / d);
  }

  double fbar(double s_val, double t) const {
    if (t < 0.0) return 0.0;
    return std::min(f_saturable(s_val, t), level() * t);
  }

  double dfbar_dt(double s_val, double t) const {
    if (t < 0.0) return 0.0;
    if (f_saturable(s_val, t) <= level() * t) return df_saturable_dt(s_val, t);
    return level();
  }

  double g(const Point& x, double s_val, double t) const { return g_with_chi(chi(x), s_val, t); }

  double g_with_chi(double chi_val, double s_val, double t) const {
    if (chi_val >= 1.0) return f_saturable(s_val, t);
    if (chi_val <= 0.0) return fbar(s_val, t);
    return chi_val * f_saturable(s_val, t) + (1.0 - chi_val) * fbar(s_val, t);
  }

  double dg_dt(double chi_val, double s_val, double t) const {
    if (chi_val >= 1.0) return df_saturable_dt(s_val, t);
    if (chi_val <= 0.0) return dfbar_dt(s_val, t);
    return chi_val * df_saturable_dt(s_val, t) + (1.0 - chi_val) * dfbar_dt(s_val, t);
  }

  /// Primitive G(x,t) of g in t with G(x,0) = 0. Closed forms inside B(z,r')
  /// (G = F) and outside B(z,r) (piecewise: F while f <= nu*mu*t, nu*mu*t^2/2
  /// on the truncated branch); adaptive quadrature of g across the annulus.
  double G(const Point& x, double s_val, double t) const { return G_with_chi(chi(x), s_val, t); }

  double G_with_chi(double chi_val, double s_val, double t) const {
    if (chi_val >= 1.0) return F_primitive(s_val, t);
    if (chi_val <= 0.0) {
      if (t < 0.0) return 0.0;
      if (f_saturable(s_val, t) <= level() * t) return F_primitive(s_val, t);
      return 0.5 * level() * t * t;
    }
    return adaptive_simpson(chi_val, s_val, 0.0, t, 1e-11, 24);
  }

 private:
  double adaptive_simpson(double chi_val, double s_val, double a, double b, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double fa = g_with_chi(chi_val, s_val, a);
    const double fm = g_with_chi(chi_val, s_val, m);
    const double fb = g_with_chi(chi_val, s_val, b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(chi_val, s_val, a, b, fa, fm, fb, whole, tol, depth);
  }

  double simpson_step(double chi_val, double s_val, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g_with_chi(chi_val, s_val, lm);
    const double frm = g_with_chi(chi_val, s_val, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(chi_val, s_val, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(chi_val, s_val, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  Point center_;
  double r_inner_, r_outer_;
  double nu_, mu_;
};

}  // namespace satwave
