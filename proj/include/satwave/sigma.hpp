#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "satwave/errors.hpp"
#include "satwave/ground_state.hpp"
#include "satwave/scalar_field.hpp"
#include "satwave/vecmath.hpp"

namespace satwave {

struct SigmaOptions {
  ShootingOptions shooting;
  double fd_step = 1e-3;        ///< step for the finite-difference gradient oracle
  int cache_digits = 12;        ///< cache key rounds (V(y), s(y)) to this many significant digits
  double descent_tol = 1e-5;    ///< stop when ||grad Sigma|| < descent_tol * (1 + |Sigma|)
  int descent_max_iters = 500;
};

struct SigmaSample {
  Point y;
  double sigma = std::numeric_limits<double>::infinity();
  Point grad_formula;  ///< empty outside the existence region
  Point grad_fd;       ///< empty unless requested
  bool inside = false;
};

struct NecessaryConditionReport {
  Point z;
  Point grad_V, grad_s;
  double qz_l2sq = 0.0;
  double integral_factor = 0.0;  ///< s^-3 int [s Q^2 - 2 ln(1+s Q^2) + s Q^2/(1+s Q^2)], positive
  Point identity_residual;       ///< d_j V ||Q||^2 + d_j s * integral_factor
  double colinearity_defect = 0.0;     ///< ||grad V|| ||grad s|| - |grad V . grad s|
  bool opposite_orientation = false;   ///< grad V . grad s <= 0
  double scale = 0.0;                  ///< ||grad V|| ||Q||^2 + ||grad s|| integral_factor
};

struct MinimumSearchResult {
  Point location;
  double sigma = 0.0;
  Point grad;
  int iterations = 0;
  bool converged = false;
  bool on_boundary = false;  ///< descent was stopped by the ball constraint
};

/// Concentration function Sigma(y): least energy of the frozen problem at y,
/// +infinity outside the existence region. Evaluations are memoized per
/// (V(y), s(y)) pair, since the frozen problem depends on y only through
/// those two values. Concurrent evaluation is safe: reads share the lock,
/// inserts take it exclusively.
class SigmaMap {
 public:
  SigmaMap(ScalarField V, ScalarField s, SigmaOptions opts = {})
      : V_(std::move(V)), s_(std::move(s)), opts_(opts) {
    if (V_.dim() != s_.dim()) throw Error("V and s must share a dimension");
  }

  int dim() const { return V_.dim(); }
  const ScalarField& V() const { return V_; }
  const ScalarField& s() const { return s_; }
  const SigmaOptions& options() const { return opts_; }

  bool inside(const Point& y) const { return in_omega(V_, s_, y); }

  double sigma(const Point& y) const {
    if (!inside(y)) return std::numeric_limits<double>::infinity();
    return entry(V_(y), s_(y)).sigma;
  }

  /// Analytic gradient, from the envelope identity at the Nehari minimizer:
  /// grad Sigma = 1/2 grad(V - 1/s)(y) ||Q_y||^2 + 1/2 int grad_y[s^-2 ln(1+s Q_y^2)].
  /// The finite-difference oracle grad_fd() confirms the 1/2 prefactor.
  Point grad_formula(const Point& y) const {
    if (!inside(y)) throw NotInOmegaError("Sigma gradient requested outside the existence region");
    const double sv = s_(y);
    const Entry e = entry(V_(y), sv);
    const Point gv = V_.gradient(y);
    const Point gs = s_.gradient(y);
    // int grad_y[s^-2 ln(1+s Q^2)] = grad s * (-2 s^-3 T + s^-2 U),
    // T = int ln(1+s Q^2), U = int Q^2/(1+s Q^2)
    const double s2 = sv * sv;
    const double tail = -2.0 * e.log_integral / (s2 * sv) + e.sat_integral / s2;
    Point g(y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
      g[j] = 0.5 * ((gv[j] + gs[j] / s2) * e.l2sq + gs[j] * tail);
    return g;
  }

  /// Finite-difference oracle: 4th-order central stencil on sigma().
  Point grad_fd(const Point& y) const {
    const double h = opts_.fd_step;
    Point g(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
      Point p = y;
      auto at = [&](double step) {
        p[j] = y[j] + step;
        const double v = sigma(p);
        if (!std::isfinite(v))
          throw NotInOmegaError("finite-difference stencil leaves the existence region");
        return v;
      };
      g[j] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
      p[j] = y[j];
    }
    return g;
  }

  SigmaSample sample(const Point& y, bool with_fd = false) const {
    SigmaSample out;
    out.y = y;
    out.inside = inside(y);
    out.sigma = sigma(y);
    if (out.inside) {
      out.grad_formula = grad_formula(y);
      if (with_fd) {
        try {
          out.grad_fd = grad_fd(y);
        } catch (const NotInOmegaError&) {
          // stencil pokes outside the existence region; leave the oracle empty
        }
      }
    }
    return out;
  }

  /// Evaluates samples on a list of points, optionally across threads.
  /// Results are returned in input order regardless of scheduling.
  std::vector<SigmaSample> map_points(const std::vector<Point>& ys, int threads = 1,
                                      bool with_fd = false) const {
    std::vector<SigmaSample> out(ys.size());
    if (threads <= 1) {
      for (std::size_t i = 0; i < ys.size(); ++i) out[i] = sample(ys[i], with_fd);
      return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= ys.size()) return;
        out[i] = sample(ys[i], with_fd);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
  }

  /// Projected gradient descent with Armijo backtracking, constrained to the
  /// closed ball around `ball_center`. Stops at ||grad|| < tol (converged)
  /// or when progress requires leaving the ball (on_boundary). When given,
  /// `sigma_trace` records the strictly decreasing Sigma value per iterate.
  MinimumSearchResult find_minimum(Point seed, const Point& ball_center, double ball_radius,
                                   std::vector<double>* sigma_trace = nullptr) const {
    if (!inside(seed)) throw NotInOmegaError("minimum search seeded outside the existence region");
    if (distance(seed, ball_center) > ball_radius) throw Error("minimum search seeded outside the ball");

    MinimumSearchResult res;
    Point y = std::move(seed);
    double fy = sigma(y);
    if (sigma_trace) sigma_trace->push_back(fy);
    double step = 1.0;
    for (int it = 0; it < opts_.descent_max_iters; ++it) {
      const Point g = grad_formula(y);
      const double gn = norm(g);
      res.iterations = it;
      if (gn < opts_.descent_tol * (1.0 + std::abs(fy))) {
        res.location = y;
        res.sigma = fy;
        res.grad = g;
        res.converged = true;
        return res;
      }
      bool accepted = false;
      bool blocked_by_ball = false;
      bool left_region = false;
      double t = step;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        Point cand = axpy(-t, g, y);
        const double d = distance(cand, ball_center);
        bool projected = false;
        if (d > ball_radius) {
          for (std::size_t j = 0; j < cand.size(); ++j)
            cand[j] = ball_center[j] + (cand[j] - ball_center[j]) * (ball_radius / d);
          projected = true;
        }
        if (!inside(cand)) {
          left_region = true;
          continue;
        }
        const double fc = sigma(cand);
        if (fc <= fy - 1e-4 * t * gn * gn || (projected && fc < fy)) {
          const double moved = distance(cand, y);
          y = std::move(cand);
          fy = fc;
          if (sigma_trace) sigma_trace->push_back(fy);
          step = std::min(4.0 * t, 1e6);
          accepted = true;
          if (projected && moved < 1e-12 * (1.0 + ball_radius)) blocked_by_ball = true;
          break;
        }
      }
      if (!accepted) {
        if (left_region) throw LeftOmegaError("descent iterates left the existence region");
        throw NoDescentError("backtracking stalled at ||grad Sigma|| = " + std::to_string(gn));
      }
      if (blocked_by_ball) {
        res.location = y;
        res.sigma = fy;
        res.grad = grad_formula(y);
        res.on_boundary = true;
        return res;
      }
    }
    throw MaxIterationsError("minimum search did not converge");
  }

  /// Identity residual d_j V ||Q_z||^2 + d_j s s^-3 int[s Q^2 - 2 ln(1+s Q^2)
  /// + s Q^2/(1+s Q^2)]; it vanishes exactly at admissible concentration
  /// points, forcing grad V and grad s into opposite directions.
  NecessaryConditionReport necessary_condition(const Point& z) const {
    if (!inside(z))
      throw NotInOmegaError("necessary-condition report requested outside the existence region");
    const double sv = s_(z);
    const Entry e = entry(V_(z), sv);
    NecessaryConditionReport rep;
    rep.z = z;
    rep.grad_V = V_.gradient(z);
    rep.grad_s = s_.gradient(z);
    rep.qz_l2sq = e.l2sq;
    rep.integral_factor = e.combined_integral / (sv * sv * sv);
    rep.identity_residual.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
      rep.identity_residual[j] = rep.grad_V[j] * e.l2sq + rep.grad_s[j] * rep.integral_factor;
    rep.colinearity_defect = norm(rep.grad_V) * norm(rep.grad_s) - std::abs(dot(rep.grad_V, rep.grad_s));
    rep.opposite_orientation = dot(rep.grad_V, rep.grad_s) <= 0.0;
    rep.scale = norm(rep.grad_V) * e.l2sq + norm(rep.grad_s) * rep.integral_factor;
    return rep;
  }

  std::size_t cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  struct Entry {
    double sigma = 0.0;
    double l2sq = 0.0;
    double log_integral = 0.0;       // int ln(1 + s Q^2)
    double sat_integral = 0.0;       // int Q^2 / (1 + s Q^2)
    double combined_integral = 0.0;  // int [s Q^2 - 2 ln(1+s Q^2) + s Q^2/(1+s Q^2)]
  };

  Entry entry(double Vv, double sv) const {
    const std::string key = cache_key(Vv, sv);
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const GroundState gs = solve_ground_state(Vv, sv, dim(), opts_.shooting);
    Entry e;
    e.sigma = gs.energy;
    e.l2sq = gs.l2sq;
    e.log_integral = gs.profile.integrate([sv](double q) { return std::log1p(sv * q * q); });
    e.sat_integral = gs.profile.integrate([sv](double q) { return q * q / (1.0 + sv * q * q); });
    e.combined_integral = gs.profile.integrate([sv](double q) {
      const double sq2 = sv * q * q;
      return sq2 - 2.0 * std::log1p(sq2) + sq2 / (1.0 + sq2);
    });
    std::unique_lock lock(mutex_);
    cache_.emplace(key, e);
    return e;
  }

  std::string cache_key(double Vv, double sv) const {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.*e|%.*e", opts_.cache_digits - 1, Vv, opts_.cache_digits - 1, sv);
    return buf;
  }

  ScalarField V_, s_;
  SigmaOptions opts_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, Entry> cache_;
};

}  // namespace satwave
