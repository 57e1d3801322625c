#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "satwave/errors.hpp"
#include "satwave/ode_rk45.hpp"
#include "satwave/radial_profile.hpp"
#include "satwave/saturable.hpp"
#include "satwave/scalar_field.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

struct ShootingOptions {
  int samples = 16384;          ///< resampled grid intervals (forced even)
  double radius_factor = 26.0;  ///< truncation radius R = radius_factor / sqrt(Vy)
  double amp_rel_tol = 1e-12;   ///< bisection width on the shooting amplitude
  double tail_tol = 1e-8;       ///< accept only |u(R)| < tail_tol * u(0)
  double scan_lo = 1e-3;        ///< amplitude scan range, in units of 1/sqrt(sy)
  double scan_hi = 1e3;
  int scan_points = 49;
  double match_level = 1e-4;    ///< switch to the linearized tail where u <= match_level * u(0)
  double ode_rtol = 1e-12;
  double ode_atol = 1e-14;
};

/// Ground state of the frozen problem -Delta u + Vy u = u^3/(1+sy u^2).
struct GroundState {
  RadialProfile profile;
  Point y;       ///< frozen point when solved through fields (empty otherwise)
  double Vy = 0.0, sy = 0.0;
  double energy = 0.0;             ///< frozen-functional value I_y(Q)
  double l2sq = 0.0, gradsq = 0.0;
  double amplitude = 0.0;          ///< Q(0)
  double nehari_residual = 0.0;    ///< <I_y'(Q), Q>
  double pohozaev_residual = 0.0;  ///< |(N-2)/2 ||grad Q||^2 + N/2 Vy ||Q||^2 - N int F|

  explicit GroundState(RadialProfile p) : profile(std::move(p)) {}
};

/// Frozen functional I_y(u) = 1/2 ||grad u||^2 + 1/2 Vy ||u||^2 - int F(sy, u),
/// with the gradient term from centered differences on the grid.
inline double frozen_energy(const RadialProfile& u, double Vy, double sy) {
  const double fint = u.integrate([sy](double t) { return F_primitive(sy, t); });
  return 0.5 * u.gradsq_fd() + 0.5 * Vy * u.l2sq() - fint;
}

/// Nehari gap ||grad u||^2 + (Vy - 1/sy) ||u||^2; the projection on the
/// Nehari manifold exists exactly when this is negative.
inline double nehari_gap(const RadialProfile& u, double Vy, double sy) {
  return u.gradsq() + (Vy - 1.0 / sy) * u.l2sq();
}

/// Unique theta > 0 with theta*u on the Nehari manifold, by bisection on the
/// strictly decreasing map tau -> ||grad u||^2 + Vy ||u||^2 - int f(tau u) tau u / tau^2.
inline double nehari_project(const RadialProfile& u, double Vy, double sy) {
  const double quad = u.gradsq() + Vy * u.l2sq();
  const double gap = nehari_gap(u, Vy, sy);
  if (quad <= 0.0) throw NoProjectionError("nehari projection needs a nonzero profile");
  if (gap >= 0.0)
    throw NoProjectionError("nehari gap is nonnegative (" + std::to_string(gap) + "); no projection exists");

  auto gfun = [&](double tau) {
    const double t2 = tau * tau;
    return quad - u.integrate([&](double q) { return t2 * q * q * q * q / (1.0 + sy * t2 * q * q); });
  };

  double lo = 1.0, hi = 1.0;
  double glo = gfun(1.0), ghi = glo;
  int guard = 0;
  while (glo <= 0.0) {
    lo *= 0.5;
    glo = gfun(lo);
    if (++guard > 400) throw MaxIterationsError("nehari projection failed to bracket from below");
  }
  guard = 0;
  while (ghi >= 0.0) {
    hi *= 2.0;
    ghi = gfun(hi);
    if (++guard > 400) throw MaxIterationsError("nehari projection failed to bracket from above");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gfun(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double pohozaev_residual(const RadialProfile& u, double Vy, double sy) {
  const double fint = u.integrate([sy](double t) { return F_primitive(sy, t); });
  const int N = u.dim();
  return std::abs(0.5 * (N - 2) * u.gradsq() + 0.5 * N * Vy * u.l2sq() - N * fint);
}

inline double pohozaev_residual(const GroundState& gs) { return pohozaev_residual(gs.profile, gs.Vy, gs.sy); }

namespace detail {

enum class ShotOutcome { undershoot, overshoot };

struct ShotKnots {
  std::vector<double> r, u, v, dv;  // dv = v' at the knot
};

/// Decaying solution of the linearized far field u'' + (N-1)u'/r = kappa^2 u,
/// phi(r) = (kappa r)^(-m) K_m(kappa r) with m = N/2 - 1, and its derivative.
struct LinearTail {
  double kappa;
  double m;
  double value(double r) const {
    const double x = kappa * r;
    return std::pow(x, -m) * std::cyl_bessel_k(m, x);
  }
  double derivative(double r) const {
    const double x = kappa * r;
    return -kappa * std::pow(x, -m) * std::cyl_bessel_k(m + 1.0, x);
  }
};

template <class Observer>
inline bool integrate_shot(double Vy, double sy, int dim, double amplitude, double R,
                           const ShootingOptions& opts, Observer&& obs) {
  auto rhs = [Vy, sy, dim](double r, const std::array<double, 2>& y) {
    const double drive = Vy * y[0] - f_saturable(sy, y[0]);
    if (r <= 0.0) return std::array<double, 2>{y[1], drive / dim};
    return std::array<double, 2>{y[1], -(dim - 1) * y[1] / r + drive};
  };
  Rk45<2>::Options oo;
  oo.rtol = opts.ode_rtol;
  oo.atol = opts.ode_atol * std::max(1.0, amplitude);
  oo.h_max = 0.02 * R;
  oo.h_init = 1e-4 * R;
  return Rk45<2>::integrate(rhs, 0.0, {amplitude, 0.0}, R, oo, obs);
}

inline ShotOutcome classify_shot(double Vy, double sy, int dim, double amplitude, double R,
                                 const ShootingOptions& opts) {
  ShotOutcome out = ShotOutcome::undershoot;
  const double vtol = 1e-13 * amplitude;
  integrate_shot(Vy, sy, dim, amplitude, R, opts,
                 [&](double, const std::array<double, 2>& y, const std::array<double, 2>&) {
                   if (y[0] < 0.0) {
                     out = ShotOutcome::overshoot;
                     return false;
                   }
                   if (y[1] > vtol) return false;  // turned back up: undershoot
                   return true;
                 });
  return out;
}

}  // namespace detail

/// Solves the frozen problem at parameter values (Vy, sy) by bisection
/// shooting on the initial amplitude. Amplitudes that turn back up while
/// positive undershoot, amplitudes that cross zero overshoot; the ground
/// state sits at the unique transition. The profile is continued past the
/// matching level with the decaying solution of the linearized equation so
/// the truncation tail is clean.
inline GroundState solve_ground_state(double Vy, double sy, int dim, const ShootingOptions& opts = {}) {
  if (dim < 2) throw Error("ground state dimension must be >= 2");
  if (Vy <= 0.0 || sy <= 0.0) throw Error("ground state needs positive Vy and sy");
  if (!in_omega(Vy, sy))
    throw NotInOmegaError("no ground state at this point: V*s = " + std::to_string(Vy * sy) +
                          " >= 1 (existence requires V*s < 1)");

  const double R = opts.radius_factor / std::sqrt(Vy);
  const double unit = 1.0 / std::sqrt(sy);

  // amplitude scan for an undershoot/overshoot bracket
  double lo = 0.0, hi = 0.0;
  {
    const double ratio = std::pow(opts.scan_hi / opts.scan_lo, 1.0 / (opts.scan_points - 1));
    double prev = 0.0;
    bool have_prev = false;
    for (int k = 0; k < opts.scan_points; ++k) {
      const double a = unit * opts.scan_lo * std::pow(ratio, k);
      const auto c = detail::classify_shot(Vy, sy, dim, a, R, opts);
      if (c == detail::ShotOutcome::overshoot) {
        if (!have_prev) throw BracketNotFoundError("amplitude scan started above the ground state");
        lo = prev;
        hi = a;
        break;
      }
      prev = a;
      have_prev = true;
    }
    if (hi == 0.0) throw BracketNotFoundError("no overshoot found in the scanned amplitude range");
  }

  while ((hi - lo) > opts.amp_rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (detail::classify_shot(Vy, sy, dim, mid, R, opts) == detail::ShotOutcome::overshoot) hi = mid;
    else lo = mid;
  }
  const double a = 0.5 * (lo + hi);

  // final trajectory, recorded until safely below the matching level
  detail::ShotKnots kn;
  const double stop_level = 0.1 * opts.match_level * a;
  detail::integrate_shot(Vy, sy, dim, a, R, opts,
                         [&](double r, const std::array<double, 2>& y, const std::array<double, 2>& dy) {
                           kn.r.push_back(r);
                           kn.u.push_back(y[0]);
                           kn.v.push_back(y[1]);
                           kn.dv.push_back(dy[1]);
                           if (y[0] <= stop_level || y[0] < 0.0) return false;
                           if (y[1] > 1e-13 * a && y[0] < 0.5 * a) return false;
                           return true;
                         });

  std::size_t im = kn.u.size();
  for (std::size_t i = 0; i < kn.u.size(); ++i) {
    if (kn.u[i] <= opts.match_level * a) {
      if (kn.u[i] > 0.0) im = i;
      break;
    }
  }
  if (im == kn.u.size() || im < 2)
    throw TruncationTooSmallError("trajectory did not reach the tail matching level before r = R");

  const detail::LinearTail tail{std::sqrt(Vy), 0.5 * dim - 1.0};
  const double rm = kn.r[im];
  const double c = kn.u[im] / tail.value(rm);
  if (std::abs(c) * tail.value(R) > opts.tail_tol * a)
    throw TruncationTooSmallError("truncation tail |u(R)| = " + std::to_string(std::abs(c) * tail.value(R)) +
                                  " exceeds tolerance " + std::to_string(opts.tail_tol * a));

  // resample: Hermite on the integrated part, linearized tail beyond rm
  const int M = opts.samples + (opts.samples % 2);
  const double h = R / M;
  std::vector<double> u(M + 1), du(M + 1);
  std::size_t j = 0;
  for (int i = 0; i <= M; ++i) {
    const double r = h * i;
    if (r >= rm) {
      u[i] = c * tail.value(r);
      du[i] = c * tail.derivative(r);
      continue;
    }
    while (j + 1 < im && kn.r[j + 1] <= r) ++j;
    u[i] = hermite(r, kn.r[j], kn.u[j], kn.v[j], kn.r[j + 1], kn.u[j + 1], kn.v[j + 1]);
    du[i] = hermite(r, kn.r[j], kn.v[j], kn.dv[j], kn.r[j + 1], kn.v[j + 1], kn.dv[j + 1]);
  }
  u[0] = a;
  du[0] = 0.0;

  GroundState gs(RadialProfile(dim, R, std::move(u), std::move(du)));
  gs.Vy = Vy;
  gs.sy = sy;
  gs.amplitude = a;
  gs.l2sq = gs.profile.l2sq();
  gs.gradsq = gs.profile.gradsq();
  gs.energy = frozen_energy(gs.profile, Vy, sy);
  gs.nehari_residual =
      gs.gradsq + Vy * gs.l2sq -
      gs.profile.integrate([sy](double q) { return q * q * q * q / (1.0 + sy * q * q); });
  gs.pohozaev_residual = pohozaev_residual(gs.profile, Vy, sy);
  return gs;
}

/// Convenience overload: freeze the fields at y. The result depends on y
/// only through (V(y), s(y)).
inline GroundState solve_ground_state(const ScalarField& V, const ScalarField& s, const Point& y,
                                      const ShootingOptions& opts = {}) {
  if (!in_omega(V, s, y))
    throw NotInOmegaError("no ground state at this point: V(y)*s(y) = " + std::to_string(V(y) * s(y)) +
                          " >= 1 (existence requires V*s < 1)");
  GroundState gs = solve_ground_state(V(y), s(y), V.dim(), opts);
  gs.y = y;
  return gs;
}

}  // namespace satwave
