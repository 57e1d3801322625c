#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace satwave {

/// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
/// Accepted knots (position, state, state derivative) are handed to an
/// observer so callers can build Hermite interpolants; the observer may
/// stop the integration early (event detection).
template <std::size_t Dim>
class Rk45 {
 public:
  using State = std::array<double, Dim>;

  struct Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 1e-4;
    double h_max = 0.05;
    double h_min = 1e-14;
    std::size_t max_steps = 2'000'000;
  };

  /// Integrates y' = rhs(x, y) from (x0, y0) to x_end. The observer is
  /// called as observer(x, y, dy) after the initial point and every accepted
  /// step; returning false stops the integration. Returns true when x_end
  /// was reached, false on observer stop or step-size breakdown.
  template <class Rhs, class Observer>
  static bool integrate(Rhs&& rhs, double x0, State y0, double x_end, const Options& opt, Observer&& observer) {
    double x = x0;
    State y = y0;
    State k1 = rhs(x, y);
    if (!observer(x, y, k1)) return false;
    double h = std::min(opt.h_init, x_end - x);

    for (std::size_t step = 0; step < opt.max_steps && x < x_end; ++step) {
      h = std::min({h, opt.h_max, x_end - x});
      State k2, k3, k4, k5, k6, k7, y5;
      State tmp;

      auto stage = [&](double c, const double* a, int n) {
        for (std::size_t i = 0; i < Dim; ++i) {
          double acc = 0.0;
          const State* ks[6] = {&k1, &k2, &k3, &k4, &k5, &k6};
          for (int j = 0; j < n; ++j) acc += a[j] * (*ks[j])[i];
          tmp[i] = y[i] + h * acc;
        }
        return rhs(x + c * h, tmp);
      };

      static constexpr double a2[] = {1.0 / 5};
      static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
      static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
      static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
      static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
      static constexpr double b5[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
      // difference between the 5th and embedded 4th order weights
      static constexpr double e[] = {71.0 / 57600,     0.0,          -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525,  -1.0 / 40};

      k2 = stage(1.0 / 5, a2, 1);
      k3 = stage(3.0 / 10, a3, 2);
      k4 = stage(4.0 / 5, a4, 3);
      k5 = stage(8.0 / 9, a5, 4);
      k6 = stage(1.0, a6, 5);
      for (std::size_t i = 0; i < Dim; ++i)
        y5[i] = y[i] + h * (b5[0] * k1[i] + b5[2] * k3[i] + b5[3] * k4[i] + b5[4] * k5[i] + b5[5] * k6[i]);
      k7 = rhs(x + h, y5);

      double err = 0.0;
      for (std::size_t i = 0; i < Dim; ++i) {
        const double ei = h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i] + e[4] * k5[i] + e[5] * k6[i] +
                               e[6] * k7[i]);
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(ei) / sc);
      }

      if (err <= 1.0) {
        x += h;
        y = y5;
        k1 = k7;  // first-same-as-last
        if (!observer(x, y, k1)) return false;
      }
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
      h *= fac;
      if (h < opt.h_min) return false;
    }
    return x >= x_end;
  }
};

/// Cubic Hermite evaluation on one interval [x0, x1].
inline double hermite(double x, double x0, double y0, double d0, double x1, double y1, double d1) {
  const double w = x1 - x0;
  const double t = (x - x0) / w;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * w * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * w * d1;
}

}  // namespace satwave
