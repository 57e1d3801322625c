#pragma once

#include <cmath>

namespace satwave {

// Saturable nonlinearity f(s,t) = t^3 / (1 + s t^2), cubic for small
// amplitude and asymptotically linear (t/s) for large amplitude.
// s is the saturation value at the evaluation point, s > 0.

inline double f_saturable(double s_val, double t) {
  return t * t * t / (1.0 + s_val * t * t);
}

/// Primitive of f in t with F(s,0) = 0:  F = t^2/(2s) - ln(1 + s t^2)/(2 s^2).
inline double F_primitive(double s_val, double t) {
  const double st2 = s_val * t * t;
  return 0.5 * t * t / s_val - 0.5 * std::log1p(st2) / (s_val * s_val);
}

/// d f / d t = t^2 (3 + s t^2) / (1 + s t^2)^2.
inline double df_saturable_dt(double s_val, double t) {
  const double d = 1.0 + s_val * t * t;
  return t * t * (3.0 + s_val * t * t) / (d * d);
}

/// f(s,t) t - 2 F(s,t) in closed form: [ln(1+s t^2) - s t^2/(1+s t^2)] / s^2.
/// Nonnegative everywhere and unbounded as |t| -> infinity.
inline double nonquadraticity_gap(double s_val, double t) {
  const double st2 = s_val * t * t;
  return (std::log1p(st2) - st2 / (1.0 + st2)) / (s_val * s_val);
}

/// Existence region of the frozen problem: a ground state exists at y
/// exactly when V(y) * s(y) < 1 (strict; the boundary is excluded).
inline bool in_omega(double V_val, double s_val) { return V_val * s_val < 1.0; }

}  // namespace satwave
