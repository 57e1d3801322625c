#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "satwave/errors.hpp"
#include "satwave/saturable.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

enum class FieldKind { constant, quadratic_well, gaussian_bump_sum, product_composite };

inline std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::constant: return "constant";
    case FieldKind::quadratic_well: return "quadratic-well";
    case FieldKind::gaussian_bump_sum: return "gaussian-bump-sum";
    case FieldKind::product_composite: return "product-composite";
  }
  return "?";
}

struct GaussianBump {
  double amplitude = 0.0;  // may be negative (a dip), subject to the field floor
  double width = 1.0;      // exponent coefficient, > 0
  Point center;
};

/// Analytic scalar coefficient field on R^N with gradient access and a
/// declared positive lower bound. Immutable after construction; safe to
/// share between threads.
///
/// Families and their parameters:
///   constant            c
///   quadratic-well      base + curv * |x - p|^2
///   gaussian-bump-sum   base + sum_i a_i * exp(-w_i |x - c_i|^2)
///   product-composite   (base1 + curv * |x - p|^2) * (base2 + a * exp(-w |x - q|^2))
class ScalarField {
 public:
  static ScalarField constant(int dim, double value, double floor) {
    ScalarField f(FieldKind::constant, dim, floor);
    f.base_ = value;
    f.beta_ = 1.0;
    f.gamma_ = 0.0;
    f.check_floor(value);
    return f;
  }

  static ScalarField quadratic_well(int dim, double base, double curvature, Point center, double floor) {
    ScalarField f(FieldKind::quadratic_well, dim, floor);
    if (curvature < 0.0) throw Error("quadratic-well curvature must be nonnegative");
    if (static_cast<int>(center.size()) != dim) throw Error("quadratic-well center has wrong dimension");
    f.base_ = base;
    f.curvature_ = curvature;
    f.p_ = std::move(center);
    f.beta_ = 2.0 * curvature * (1.0 + norm(f.p_)) + 1.0;
    f.gamma_ = 1.0;
    f.check_floor(base);
    return f;
  }

  static ScalarField gaussian_bumps(int dim, double base, std::vector<GaussianBump> bumps, double floor) {
    ScalarField f(FieldKind::gaussian_bump_sum, dim, floor);
    f.base_ = base;
    double beta = 1.0;
    for (const auto& b : bumps) {
      if (b.width <= 0.0) throw Error("gaussian bump width must be positive");
      if (static_cast<int>(b.center.size()) != dim) throw Error("gaussian bump center has wrong dimension");
      // max_t 2 w t exp(-w t^2) = sqrt(2 w / e)
      beta += std::abs(b.amplitude) * std::sqrt(2.0 * b.width / std::exp(1.0));
    }
    f.bumps_ = std::move(bumps);
    f.beta_ = beta;
    f.gamma_ = 0.0;
    return f;
  }

  static ScalarField product_composite(int dim, double base1, double curvature, Point p, double base2,
                                       double amplitude, double width, Point q, double floor) {
    ScalarField f(FieldKind::product_composite, dim, floor);
    if (curvature < 0.0) throw Error("product-composite curvature must be nonnegative");
    if (width <= 0.0) throw Error("product-composite width must be positive");
    if (static_cast<int>(p.size()) != dim || static_cast<int>(q.size()) != dim)
      throw Error("product-composite center has wrong dimension");
    f.base_ = base1;
    f.curvature_ = curvature;
    f.p_ = std::move(p);
    f.base2_ = base2;
    f.amp_ = amplitude;
    f.width_ = width;
    f.q_ = std::move(q);
    const double b2max = std::abs(base2) + std::abs(amplitude);
    const double pn = norm(f.p_);
    f.beta_ = 2.0 * curvature * (1.0 + pn) * b2max +
              (std::abs(base1) + 4.0 * curvature * std::exp(pn)) * std::abs(amplitude) *
                  std::sqrt(2.0 * width / std::exp(1.0)) +
              1.0;
    f.gamma_ = 1.0;
    return f;
  }

  double operator()(const Point& x) const {
    switch (kind_) {
      case FieldKind::constant:
        return base_;
      case FieldKind::quadratic_well:
        return base_ + curvature_ * sqdist(x, p_);
      case FieldKind::gaussian_bump_sum: {
        double v = base_;
        for (const auto& b : bumps_) v += b.amplitude * std::exp(-b.width * sqdist(x, b.center));
        return v;
      }
      case FieldKind::product_composite:
        return (base_ + curvature_ * sqdist(x, p_)) *
               (base2_ + amp_ * std::exp(-width_ * sqdist(x, q_)));
    }
    return 0.0;
  }

  Point gradient(const Point& x) const {
    Point g(x.size(), 0.0);
    switch (kind_) {
      case FieldKind::constant:
        break;
      case FieldKind::quadratic_well:
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * curvature_ * (x[i] - p_[i]);
        break;
      case FieldKind::gaussian_bump_sum:
        for (const auto& b : bumps_) {
          const double e = b.amplitude * std::exp(-b.width * sqdist(x, b.center));
          for (std::size_t i = 0; i < x.size(); ++i) g[i] += -2.0 * b.width * (x[i] - b.center[i]) * e;
        }
        break;
      case FieldKind::product_composite: {
        const double A = base_ + curvature_ * sqdist(x, p_);
        const double e = std::exp(-width_ * sqdist(x, q_));
        const double B = base2_ + amp_ * e;
        for (std::size_t i = 0; i < x.size(); ++i) {
          g[i] = 2.0 * curvature_ * (x[i] - p_[i]) * B + A * amp_ * e * (-2.0 * width_) * (x[i] - q_[i]);
        }
        break;
      }
    }
    return g;
  }

  FieldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double floor_value() const { return floor_; }

  /// Growth envelope: |grad| <= beta * exp(gamma |x|) everywhere.
  double growth_beta() const { return beta_; }
  double growth_gamma() const { return gamma_; }

  /// True if the field is invariant under rotations about `center`
  /// (by construction of its parameters, not by sampling).
  bool radial_about(const Point& center, double tol = 1e-12) const {
    switch (kind_) {
      case FieldKind::constant:
        return true;
      case FieldKind::quadratic_well:
        return curvature_ == 0.0 || distance(p_, center) <= tol;
      case FieldKind::gaussian_bump_sum: {
        for (const auto& b : bumps_)
          if (b.amplitude != 0.0 && distance(b.center, center) > tol) return false;
        return true;
      }
      case FieldKind::product_composite:
        return (curvature_ == 0.0 || distance(p_, center) <= tol) &&
               (amp_ == 0.0 || distance(q_, center) <= tol);
    }
    return false;
  }

 private:
  ScalarField(FieldKind kind, int dim, double floor) : kind_(kind), dim_(dim), floor_(floor) {
    if (dim < 1) throw Error("field dimension must be >= 1");
    if (floor <= 0.0) throw Error("field floor must be positive");
  }

  void check_floor(double v) const {
    if (v < floor_) throw Error("field value below its declared floor");
  }

  static double sqdist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return s;
  }

  FieldKind kind_;
  int dim_;
  double floor_;
  double base_ = 0.0;
  double curvature_ = 0.0;
  Point p_;
  std::vector<GaussianBump> bumps_;
  double base2_ = 0.0, amp_ = 0.0, width_ = 1.0;
  Point q_;
  double beta_ = 1.0, gamma_ = 0.0;
};

/// Existence test for the frozen problem at a point.
inline bool in_omega(const ScalarField& V, const ScalarField& s, const Point& y) {
  return in_omega(V(y), s(y));
}

}  // namespace satwave
