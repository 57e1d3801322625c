#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "satwave/errors.hpp"
#include "satwave/ground_state.hpp"
#include "satwave/penalization.hpp"
#include "satwave/radial_profile.hpp"
#include "satwave/scalar_field.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

/// Discretization of the penalized problem -eps^2 Lap u + V u = g(x,u) with
/// homogeneous Dirichlet data on a truncated domain: either the radial
/// interval [0, extent] about the ball center (fast path, valid when V, s
/// and the ball are concentric and radial) or the box [-extent, extent]^dim.
struct EpsProblem {
  double epsilon;
  int dim;
  bool radial;
  double extent;
  int intervals;  ///< grid intervals (per axis for the box)
  ScalarField V, s;
  PenalizedNonlinearity pen;
  double points_per_eps = 16.0;  ///< grid resolution target h = eps / points_per_eps
  double newton_tol = 1e-9;
  int max_newton = 80;
  int max_flow = 5000;
  double trivial_frac = 1e-6;  ///< collapse threshold relative to the guess amplitude

  double spacing() const { return (radial ? extent : 2.0 * extent) / intervals; }

  EpsProblem with_epsilon(double eps) const {
    EpsProblem p = *this;
    p.epsilon = eps;
    const double length = radial ? extent : 2.0 * extent;
    int n = static_cast<int>(std::ceil(length * points_per_eps / eps));
    n += n % 2;
    p.intervals = n;
    return p;
  }

  void validate() const {
    if (epsilon <= 0.0) throw Error("epsilon must be positive");
    if (dim < 2) throw Error("dimension must be >= 2");
    if (intervals < 4) throw Error("grid too coarse");
    if (V.dim() != dim || s.dim() != dim) throw Error("field dimension mismatch");
    if (spacing() > epsilon / 4.0 + 1e-14)
      throw Error("grid spacing " + std::to_string(spacing()) + " exceeds eps/4; refine the grid");
    const double r = pen.outer_radius();
    if (radial) {
      if (extent < 3.0 * r) throw Error("domain must contain the ball with margin >= 2r");
      if (!V.radial_about(pen.center()) || !s.radial_about(pen.center()))
        throw Error("radial fast path requires V, s and the ball to be concentric and radial");
    } else {
      for (double zj : pen.center())
        if (std::abs(zj) + 3.0 * r > extent) throw Error("domain must contain the ball with margin >= 2r");
    }
  }
};

/// Solution of the discretized problem plus solver metadata. Values include
/// the Dirichlet boundary nodes.
struct GridSolution {
  std::vector<double> values;
  double epsilon = 0.0;
  int dim = 0;
  bool radial = true;
  double extent = 0.0;
  int intervals = 0;
  double residual_norm = 0.0;
  double energy = 0.0;
  double rescaled_energy = 0.0;
  double min_value = 0.0;
  int newton_iterations = 0;
  int flow_iterations = 0;
  bool used_fallback = false;
  bool converged = false;

  double spacing() const { return (radial ? extent : 2.0 * extent) / intervals; }
  std::size_t nodes_per_axis() const { return static_cast<std::size_t>(intervals) + 1; }

  /// Physical location of a node; radial grids report z + r e_1.
  Point node_point(std::size_t flat, const Point& center) const {
    Point x(center);
    if (radial) {
      x[0] += spacing() * static_cast<double>(flat);
      return x;
    }
    const std::size_t npa = nodes_per_axis();
    for (int j = dim - 1; j >= 0; --j) {
      x[j] = -extent + spacing() * static_cast<double>(flat % npa);
      flat /= npa;
    }
    return x;
  }

  double max_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
  }
};

namespace detail {

/// Finite-volume radial operator: node masses are exact cell integrals of
/// r^(dim-1), face coefficients use the midpoint radius. The discrete energy
/// is E(u) = eps^2/2 sum_f c_f ((u_+ - u_-)/h)^2 + sum_i w_i (V_i u_i^2 / 2 -
/// G_i(u_i)), and the pointwise residual is its w-scaled gradient, a
/// second-order approximation of -eps^2 Lap u + V u - g(x,u).
class RadialEpsOperator {
 public:
  RadialEpsOperator(const EpsProblem& p) : p_(p), M_(p.intervals), h_(p.spacing()) {
    const double area = RadialProfile::unit_sphere_area(p.dim);
    V_.resize(M_ + 1);
    s_.resize(M_ + 1);
    chi_.resize(M_ + 1);
    w_.resize(M_ + 1);
    cface_.resize(M_ + 1);
    Point x = p.pen.center();
    for (int i = 0; i <= M_; ++i) {
      const double r = h_ * i;
      x[0] = p.pen.center()[0] + r;
      V_[i] = p.V(x);
      s_[i] = p.s(x);
      chi_[i] = p.pen.chi_radial(r);
      const double rl = std::max(0.0, r - 0.5 * h_);
      const double rr = std::min(p.extent, r + 0.5 * h_);
      w_[i] = area * (std::pow(rr, p.dim) - std::pow(rl, p.dim)) / p.dim;
      cface_[i] = area * h_ * std::pow(r + 0.5 * h_, p.dim - 1);  // face i+1/2
    }
  }

  int unknowns() const { return M_; }  // nodes 0..M-1; u_M = 0

  void residual(const std::vector<double>& u, std::vector<double>& res) const {
    res.resize(M_);
    const double e2 = p_.epsilon * p_.epsilon;
    for (int i = 0; i < M_; ++i) {
      double flux = cface_[i] * (u[i + 1] - u[i]);
      if (i > 0) flux -= cface_[i - 1] * (u[i] - u[i - 1]);
      res[i] = -e2 * flux / (h_ * h_ * w_[i]) + V_[i] * u[i] - p_.pen.g_with_chi(chi_[i], s_[i], u[i]);
    }
  }

  double energy(const std::vector<double>& u) const {
    const double e2 = p_.epsilon * p_.epsilon;
    double quad = 0.0, rest = 0.0;
    for (int i = 0; i < M_; ++i) {
      const double d = (u[i + 1] - u[i]) / h_;
      quad += cface_[i] * d * d;
      rest += w_[i] * (0.5 * V_[i] * u[i] * u[i] - p_.pen.G_with_chi(chi_[i], s_[i], u[i]));
    }
    return 0.5 * e2 * quad + rest;
  }

  /// Linear part -eps^2 Lap_h u + V u in pointwise units (for consistency tests).
  void linear_apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(M_);
    const double e2 = p_.epsilon * p_.epsilon;
    for (int i = 0; i < M_; ++i) {
      double flux = cface_[i] * (u[i + 1] - u[i]);
      if (i > 0) flux -= cface_[i - 1] * (u[i] - u[i - 1]);
      out[i] = -e2 * flux / (h_ * h_ * w_[i]) + V_[i] * u[i];
    }
  }

  const std::vector<double>& node_weights() const { return w_; }

  /// Solves (Hessian of E) delta = -grad E by symmetric tridiagonal LDL^T.
  bool newton_step(const std::vector<double>& u, const std::vector<double>& res,
                   std::vector<double>& delta) const {
    const double e2 = p_.epsilon * p_.epsilon;
    std::vector<double> diag(M_), off(M_ - 1), rhs(M_);
    for (int i = 0; i < M_; ++i) {
      double d = e2 * cface_[i] / (h_ * h_);
      if (i > 0) d += e2 * cface_[i - 1] / (h_ * h_);
      d += w_[i] * (V_[i] - p_.pen.dg_dt(chi_[i], s_[i], u[i]));
      diag[i] = d;
      if (i + 1 < M_) off[i] = -e2 * cface_[i] / (h_ * h_);
      rhs[i] = -w_[i] * res[i];
    }
    // LDL^T without pivoting; the factorization may be indefinite, the line
    // search guards against bad directions.
    for (int i = 1; i < M_; ++i) {
      if (std::abs(diag[i - 1]) < 1e-300) return false;
      const double l = off[i - 1] / diag[i - 1];
      diag[i] -= l * off[i - 1];
      rhs[i] -= l * rhs[i - 1];
      off[i - 1] = l;
    }
    delta.assign(M_, 0.0);
    if (std::abs(diag[M_ - 1]) < 1e-300) return false;
    delta[M_ - 1] = rhs[M_ - 1] / diag[M_ - 1];
    for (int i = M_ - 2; i >= 0; --i) delta[i] = rhs[i] / diag[i] - off[i] * delta[i + 1];
    for (double v : delta)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  const EpsProblem& p_;
  int M_;
  double h_;
  std::vector<double> V_, s_, chi_, w_, cface_;
};

/// Box operator on [-L, L]^dim with the standard 2(dim)+1 stencil; the
/// Newton systems are solved with Eigen's sparse LU.
class BoxEpsOperator {
 public:
  BoxEpsOperator(const EpsProblem& p) : p_(p), n_(p.intervals), h_(p.spacing()) {
    npa_ = n_ + 1;
    total_ = 1;
    for (int j = 0; j < p.dim; ++j) total_ *= npa_;
    stride_.assign(p.dim, 1);
    for (int j = p.dim - 2; j >= 0; --j) stride_[j] = stride_[j + 1] * npa_;
    V_.resize(total_);
    s_.resize(total_);
    chi_.resize(total_);
    interior_.reserve(total_);
    index_of_.assign(total_, -1);
    Point x(p.dim);
    for (std::size_t f = 0; f < total_; ++f) {
      bool boundary = false;
      std::size_t rem = f;
      for (int j = 0; j < p.dim; ++j) {
        const std::size_t k = rem / stride_[j];
        rem %= stride_[j];
        x[j] = -p.extent + h_ * static_cast<double>(k);
        if (k == 0 || k == static_cast<std::size_t>(n_)) boundary = true;
      }
      V_[f] = p.V(x);
      s_[f] = p.s(x);
      chi_[f] = p.pen.chi(x);
      if (!boundary) {
        index_of_[f] = static_cast<int>(interior_.size());
        interior_.push_back(f);
      }
    }
  }

  int unknowns() const { return static_cast<int>(interior_.size()); }
  const std::vector<std::size_t>& interior() const { return interior_; }

  void residual(const std::vector<double>& u, std::vector<double>& res) const {
    res.resize(interior_.size());
    const double e2h2 = p_.epsilon * p_.epsilon / (h_ * h_);
    for (std::size_t k = 0; k < interior_.size(); ++k) {
      const std::size_t f = interior_[k];
      double lap = 0.0;
      for (int j = 0; j < p_.dim; ++j)
        lap += u[f + stride_[j]] - 2.0 * u[f] + u[f - stride_[j]];
      res[k] = -e2h2 * lap + V_[f] * u[f] - p_.pen.g_with_chi(chi_[f], s_[f], u[f]);
    }
  }

  double energy(const std::vector<double>& u) const {
    const double e2 = p_.epsilon * p_.epsilon;
    const double wcell = std::pow(h_, p_.dim);
    const double wface = std::pow(h_, p_.dim - 2);
    double quad = 0.0, rest = 0.0;
    for (std::size_t f = 0; f < total_; ++f) {
      std::size_t rem = f;
      for (int j = 0; j < p_.dim; ++j) {
        const std::size_t k = rem / stride_[j];
        rem %= stride_[j];
        if (k + 1 < static_cast<std::size_t>(npa_)) {
          const double d = u[f + stride_[j]] - u[f];
          quad += wface * d * d;
        }
      }
      if (index_of_[f] >= 0)
        rest += wcell * (0.5 * V_[f] * u[f] * u[f] - p_.pen.G_with_chi(chi_[f], s_[f], u[f]));
    }
    return 0.5 * e2 * quad + rest;
  }

  void linear_apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(interior_.size());
    const double e2h2 = p_.epsilon * p_.epsilon / (h_ * h_);
    for (std::size_t k = 0; k < interior_.size(); ++k) {
      const std::size_t f = interior_[k];
      double lap = 0.0;
      for (int j = 0; j < p_.dim; ++j)
        lap += u[f + stride_[j]] - 2.0 * u[f] + u[f - stride_[j]];
      out[k] = -e2h2 * lap + V_[f] * u[f];
    }
  }

  std::vector<double> node_weights() const {
    return std::vector<double>(interior_.size(), std::pow(h_, p_.dim));
  }

  bool newton_step(const std::vector<double>& u, const std::vector<double>& res,
                   std::vector<double>& delta) const {
    using Trip = Eigen::Triplet<double>;
    const int m = unknowns();
    const double wcell = std::pow(h_, p_.dim);
    const double e2f = p_.epsilon * p_.epsilon * std::pow(h_, p_.dim - 2);
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(m) * (2 * p_.dim + 1));
    Eigen::VectorXd rhs(m);
    for (int k = 0; k < m; ++k) {
      const std::size_t f = interior_[k];
      double d = 2.0 * p_.dim * e2f;
      d += wcell * (V_[f] - p_.pen.dg_dt(chi_[f], s_[f], u[f]));
      trips.emplace_back(k, k, d);
      for (int j = 0; j < p_.dim; ++j) {
        for (const std::size_t nb : {f + stride_[j], f - stride_[j]}) {
          const int kn = index_of_[nb];
          if (kn >= 0) trips.emplace_back(k, kn, -e2f);
        }
      }
      rhs(k) = -wcell * res[k];
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) return false;
    Eigen::VectorXd d = lu.solve(rhs);
    if (lu.info() != Eigen::Success) return false;
    delta.resize(m);
    for (int k = 0; k < m; ++k) {
      if (!std::isfinite(d(k))) return false;
      delta[k] = d(k);
    }
    return true;
  }

 private:
  const EpsProblem& p_;
  int n_;
  double h_;
  int npa_ = 0;
  std::size_t total_ = 0;
  std::vector<std::size_t> stride_;
  std::vector<double> V_, s_, chi_;
  std::vector<std::size_t> interior_;
  std::vector<int> index_of_;
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

/// Shared damped-Newton driver with a normalized-gradient-flow fallback.
/// `unknown_index` maps unknown k to its slot in the full grid vector.
template <class Op>
void solve_nonlinear(const Op& op, const EpsProblem& p, std::vector<double>& full,
                     const std::vector<std::size_t>& unknown_index, GridSolution& sol) {
  const int m = op.unknowns();
  const double guess_amp = norm_inf(full);
  if (guess_amp <= 0.0) throw ConvergedToZeroError("initial guess is identically zero");

  std::vector<double> res, delta, trial(full), res_trial;
  auto eval_residual = [&](const std::vector<double>& grid, std::vector<double>& out) {
    op.residual(grid, out);
  };

  eval_residual(full, res);
  double rn = norm2(res);
  int newton_done = 0, flow_done = 0;
  bool fallback = false;

  auto check_trivial = [&](const std::vector<double>& grid) {
    double amp = 0.0;
    for (double v : grid) amp = std::max(amp, std::abs(v));
    if (amp < p.trivial_frac * guess_amp)
      throw ConvergedToZeroError("iterates collapsed to the trivial critical point");
  };

  while (true) {
    bool newton_ok = true;
    for (; newton_done < p.max_newton; ++newton_done) {
      if (norm_inf(res) < p.newton_tol) break;
      if (!op.newton_step(full, res, delta)) {
        newton_ok = false;
        break;
      }
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 14; ++ls, lambda *= 0.5) {
        for (int k = 0; k < m; ++k) trial[unknown_index[k]] = full[unknown_index[k]] + lambda * delta[k];
        eval_residual(trial, res_trial);
        const double rt = norm2(res_trial);
        if (rt < (1.0 - 1e-4 * lambda) * rn && std::isfinite(rt)) {
          full.swap(trial);
          res.swap(res_trial);
          rn = rt;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        newton_ok = false;
        break;
      }
      check_trivial(full);
    }
    if (norm_inf(res) < p.newton_tol) break;
    if (newton_done >= p.max_newton && newton_ok)
      throw NoConvergenceError("Newton iteration budget exhausted, residual " + std::to_string(norm_inf(res)));

    // fallback: normalized gradient flow until Newton becomes viable again
    fallback = true;
    double tau = 0.05 * std::max(guess_amp, 1.0);
    const double target = 0.3 * rn;
    bool improved = false;
    for (; flow_done < p.max_flow && rn > target && rn > p.newton_tol; ++flow_done) {
      const double scale = tau / std::max(rn, 1e-300);
      for (int k = 0; k < m; ++k) trial[unknown_index[k]] = full[unknown_index[k]] - scale * res[k];
      eval_residual(trial, res_trial);
      const double rt = norm2(res_trial);
      if (rt < rn) {
        full.swap(trial);
        res.swap(res_trial);
        rn = rt;
        tau = std::min(tau * 1.2, 1.0 * std::max(guess_amp, 1.0));
        improved = true;
        check_trivial(full);
      } else {
        tau *= 0.5;
        if (tau < 1e-14 * guess_amp) break;
      }
    }
    if (!improved || flow_done >= p.max_flow)
      throw NoConvergenceError("gradient-flow fallback stalled, residual " + std::to_string(norm_inf(res)));
  }

  check_trivial(full);
  // residual recomputed fresh on the final values
  eval_residual(full, res);
  sol.residual_norm = norm_inf(res);
  sol.newton_iterations = newton_done;
  sol.flow_iterations = flow_done;
  sol.used_fallback = fallback;
  sol.converged = true;
  sol.energy = op.energy(full);
  sol.rescaled_energy = sol.energy / std::pow(p.epsilon, p.dim);
  double mn = full.empty() ? 0.0 : full[0];
  for (double v : full) mn = std::min(mn, v);
  sol.min_value = mn;
}

inline double boundary_taper(double dist_to_boundary, double ramp) {
  if (dist_to_boundary >= ramp) return 1.0;
  if (dist_to_boundary <= 0.0) return 0.0;
  const double t = dist_to_boundary / ramp;
  return t * t * t * (10.0 + t * (6.0 * t - 15.0));
}

}  // namespace detail

/// Spike-profile initial guess Q_z((x - z)/eps), tapered to zero near the
/// domain boundary.
inline GridSolution initial_guess(const EpsProblem& p, const GroundState& Qz) {
  p.validate();
  GridSolution sol;
  sol.epsilon = p.epsilon;
  sol.dim = p.dim;
  sol.radial = p.radial;
  sol.extent = p.extent;
  sol.intervals = p.intervals;
  const double h = p.spacing();
  const double ramp = 0.1 * p.extent;
  if (p.radial) {
    sol.values.resize(p.intervals + 1);
    for (int i = 0; i <= p.intervals; ++i) {
      const double r = h * i;
      sol.values[i] = detail::boundary_taper(p.extent - r, ramp) * Qz.profile.value_at(r / p.epsilon);
    }
    sol.values.back() = 0.0;
  } else {
    const std::size_t npa = static_cast<std::size_t>(p.intervals) + 1;
    std::size_t total = 1;
    for (int j = 0; j < p.dim; ++j) total *= npa;
    sol.values.assign(total, 0.0);
    Point x(p.dim);
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t rem = f;
      bool boundary = false;
      double edge = p.extent;
      for (int j = p.dim - 1; j >= 0; --j) {
        const std::size_t k = rem % npa;
        rem /= npa;
        x[j] = -p.extent + h * static_cast<double>(k);
        edge = std::min(edge, p.extent - std::abs(x[j]));
        if (k == 0 || k == npa - 1) boundary = true;
      }
      if (boundary) continue;
      sol.values[f] =
          detail::boundary_taper(edge, ramp) * Qz.profile.value_at(distance(x, p.pen.center()) / p.epsilon);
    }
  }
  return sol;
}

inline GridSolution initial_guess(const EpsProblem& p) {
  const GroundState Qz = solve_ground_state(p.V, p.s, p.pen.center());
  return initial_guess(p, Qz);
}

/// Damped Newton on the discrete residual with an Armijo line search; on
/// Newton failure a normalized gradient flow restarts progress. Converged
/// solutions satisfy the discrete equation to newton_tol in the max norm.
inline GridSolution solve_penalized(const EpsProblem& p, const GridSolution& guess) {
  p.validate();
  if (guess.intervals != p.intervals || guess.radial != p.radial)
    throw Error("guess grid does not match the problem grid");
  GridSolution sol = guess;
  sol.epsilon = p.epsilon;
  if (p.radial) {
    detail::RadialEpsOperator op(p);
    std::vector<std::size_t> idx(op.unknowns());
    for (int i = 0; i < op.unknowns(); ++i) idx[i] = static_cast<std::size_t>(i);
    sol.values.back() = 0.0;
    detail::solve_nonlinear(op, p, sol.values, idx, sol);
  } else {
    detail::BoxEpsOperator op(p);
    detail::solve_nonlinear(op, p, sol.values, op.interior(), sol);
  }
  return sol;
}

/// True when the solution still exceeds, somewhere outside the closed ball,
/// the amplitude at which the truncated branch of the penalization is the
/// active one. False means the solution also solves the original problem.
inline bool penalization_active(const GridSolution& sol, const EpsProblem& p) {
  const double r_out = p.pen.outer_radius();
  if (sol.radial) {
    const double h = sol.spacing();
    for (std::size_t i = 0; i < sol.values.size(); ++i) {
      const double r = h * static_cast<double>(i);
      if (r <= r_out) continue;
      Point x = p.pen.center();
      x[0] += r;
      if (sol.values[i] > p.pen.switch_amplitude(p.s(x))) return true;
    }
    return false;
  }
  for (std::size_t f = 0; f < sol.values.size(); ++f) {
    const Point x = sol.node_point(f, Point(p.dim, 0.0));
    if (distance(x, p.pen.center()) <= r_out) continue;
    if (sol.values[f] > p.pen.switch_amplitude(p.s(x))) return true;
  }
  return false;
}

namespace detail {

/// Linear interpolation of the previous solution at an arbitrary point.
inline double sample_solution(const GridSolution& sol, const Point& x, const Point& center) {
  if (sol.radial) {
    const double r = distance(x, center);
    const double s = r / sol.spacing();
    if (s >= static_cast<double>(sol.values.size() - 1)) return 0.0;
    const std::size_t k = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(k);
    return (1.0 - t) * sol.values[k] + t * sol.values[k + 1];
  }
  const std::size_t npa = sol.nodes_per_axis();
  std::vector<std::size_t> stride(sol.dim, 1);
  for (int j = sol.dim - 2; j >= 0; --j) stride[j] = stride[j + 1] * npa;
  std::vector<std::size_t> kbase(sol.dim);
  std::vector<double> frac(sol.dim);
  for (int j = 0; j < sol.dim; ++j) {
    const double sj = (x[j] + sol.extent) / sol.spacing();
    if (sj < 0.0 || sj > static_cast<double>(npa - 1)) return 0.0;
    kbase[j] = std::min(static_cast<std::size_t>(sj), npa - 2);
    frac[j] = sj - static_cast<double>(kbase[j]);
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (1u << sol.dim); ++corner) {
    double wgt = 1.0;
    std::size_t fo = 0;
    for (int j = 0; j < sol.dim; ++j) {
      const bool hi = corner & (1u << j);
      wgt *= hi ? frac[j] : 1.0 - frac[j];
      fo += (kbase[j] + (hi ? 1 : 0)) * stride[j];
    }
    acc += wgt * sol.values[fo];
  }
  return acc;
}

/// Warm start for the next (smaller) eps: the previous solution is resampled
/// in the concentration-scaled variable (x - z)/eps, so the spike keeps its
/// rescaled shape instead of its physical width. Interpolation is linear.
inline std::vector<double> interp_warm_start(const GridSolution& prev, const EpsProblem& p) {
  const double h_new = p.spacing();
  const double scale = prev.epsilon / p.epsilon;
  const Point& z = p.pen.center();
  if (p.radial) {
    std::vector<double> out(p.intervals + 1, 0.0);
    Point x = z;
    for (int i = 0; i < p.intervals; ++i) {
      x[0] = z[0] + scale * (h_new * i);
      out[i] = sample_solution(prev, x, z);
    }
    return out;
  }
  const std::size_t npa = static_cast<std::size_t>(p.intervals) + 1;
  std::size_t total = 1;
  for (int j = 0; j < p.dim; ++j) total *= npa;
  std::vector<double> out(total, 0.0);
  Point x(p.dim);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rem = f;
    bool boundary = false;
    for (int j = p.dim - 1; j >= 0; --j) {
      const std::size_t k = rem % npa;
      rem /= npa;
      if (k == 0 || k == npa - 1) boundary = true;
      const double xj = -p.extent + h_new * static_cast<double>(k);
      x[j] = z[j] + scale * (xj - z[j]);
    }
    if (!boundary) out[f] = sample_solution(prev, x, z);
  }
  return out;
}

}  // namespace detail

/// Warm-started continuation from the largest eps downward. Each entry is
/// solved on a grid refined to the per-eps resolution target; the first
/// failure aborts the sweep and the prefix is returned.
inline std::vector<GridSolution> continuation_sweep(const EpsProblem& base,
                                                    const std::vector<double>& eps_list,
                                                    const ShootingOptions& shooting = {}) {
  if (eps_list.empty()) return {};
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1])) throw Error("eps list must be strictly decreasing");

  std::vector<GridSolution> out;
  const GroundState Qz = solve_ground_state(base.V, base.s, base.pen.center(), shooting);
  for (const double eps : eps_list) {
    EpsProblem p = base.with_epsilon(eps);
    GridSolution guess;
    if (out.empty()) {
      guess = initial_guess(p, Qz);
    } else {
      guess = out.back();
      guess.values = detail::interp_warm_start(out.back(), p);
      guess.intervals = p.intervals;
      guess.epsilon = eps;
    }
    try {
      out.push_back(solve_penalized(p, guess));
    } catch (const SolverError&) {
      // one retry from the cold spike guess before giving up on the sweep
      try {
        out.push_back(solve_penalized(p, initial_guess(p, Qz)));
      } catch (const SolverError&) {
        break;
      }
    }
  }
  return out;
}

}  // namespace satwave
