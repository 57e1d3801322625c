#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "satwave/errors.hpp"

namespace satwave {

/// A sampled radial function r -> u(r) on the uniform grid 0 = r_0 < ... <
/// r_M = R together with quadrature weights for integrals over R^N with the
/// radial measure omega_{N-1} r^(N-1) dr. Composite Simpson weights (M even)
/// keep the quadrature error at O(h^4) for smooth integrands and reproduce
/// ball volumes to machine precision in the dimensions used here.
///
/// Derivative samples are optional; when present they come from the ODE
/// integrator and carry its accuracy. gradsq_fd() always uses centered
/// differences on the grid.
class RadialProfile {
 public:
  RadialProfile(int dim, double radius, std::vector<double> values, std::vector<double> derivatives = {})
      : dim_(dim), radius_(radius), u_(std::move(values)), du_(std::move(derivatives)) {
    if (dim_ < 2) throw Error("radial profile dimension must be >= 2");
    if (radius_ <= 0.0) throw Error("radial profile radius must be positive");
    if (u_.size() < 3 || u_.size() % 2 == 0) throw Error("radial profile needs an odd sample count (even interval count)");
    if (!du_.empty() && du_.size() != u_.size()) throw Error("derivative sample count mismatch");
    h_ = radius_ / static_cast<double>(u_.size() - 1);
    build_weights();
  }

  static double unit_sphere_area(int dim) {
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
  }

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  double spacing() const { return h_; }
  std::size_t size() const { return u_.size(); }
  double r(std::size_t i) const { return h_ * static_cast<double>(i); }
  const std::vector<double>& values() const { return u_; }
  const std::vector<double>& derivatives() const { return du_; }
  const std::vector<double>& weights() const { return w_; }
  bool has_derivatives() const { return !du_.empty(); }

  /// Integral over R^N of fn(u(|x|)); fn is evaluated per node.
  template <class Fn>
  double integrate(Fn&& fn) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) acc += w_[i] * fn(u_[i]);
    return acc;
  }

  /// Integral over R^N of fn(r, u(r)).
  template <class Fn>
  double integrate_r(Fn&& fn) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) acc += w_[i] * fn(r(i), u_[i]);
    return acc;
  }

  double l2sq() const {
    return integrate([](double u) { return u * u; });
  }

  /// ||grad u||_2^2 from the stored derivative samples when available,
  /// otherwise from centered differences.
  double gradsq() const {
    if (!has_derivatives()) return gradsq_fd();
    double acc = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) acc += w_[i] * du_[i] * du_[i];
    return acc;
  }

  /// ||grad u||_2^2 by centered differences on the grid (u'(0) = 0 by
  /// radial symmetry, one-sided at the outer end).
  double gradsq_fd() const {
    const std::size_t M = u_.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 1; i < M; ++i) {
      const double d = (u_[i + 1] - u_[i - 1]) / (2.0 * h_);
      acc += w_[i] * d * d;
    }
    const double dend = (u_[M] - u_[M - 1]) / h_;
    acc += w_[M] * dend * dend;
    return acc;
  }

  /// Linear interpolation; zero beyond the truncation radius.
  double value_at(double rr) const {
    if (rr < 0.0) rr = -rr;
    if (rr >= radius_) return 0.0;
    const double s = rr / h_;
    const std::size_t i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return (1.0 - t) * u_[i] + t * u_[i + 1];
  }

 private:
  void build_weights() {
    const std::size_t n = u_.size();
    const double area = unit_sphere_area(dim_);
    w_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double c;
      if (i == 0 || i + 1 == n) c = 1.0;
      else c = (i % 2 == 1) ? 4.0 : 2.0;
      w_[i] = area * (h_ / 3.0) * c * std::pow(r(i), dim_ - 1);
    }
  }

  int dim_;
  double radius_;
  double h_ = 0.0;
  std::vector<double> u_, du_, w_;
};

}  // namespace satwave
