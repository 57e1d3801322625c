#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "satwave/ground_state.hpp"
#include "test_util.hpp"

using namespace satwave;
using satwave::testing::Rng;
using satwave::testing::bump_profile;

TEST_CASE("nehari gap arithmetic") {
  const RadialProfile u = bump_profile(2, 15.0, 800, 1.2, 2.5, 0.2);
  const double G = u.gradsq(), L = u.l2sq();
  // direct formula with Vy=0.5, sy=0.5: G + (0.5 - 2) L
  CHECK(nehari_gap(u, 0.5, 0.5) == Catch::Approx(G - 1.5 * L));
  // zero profile
  RadialProfile zero(2, 10.0, std::vector<double>(101, 0.0));
  CHECK(nehari_gap(zero, 0.5, 0.5) == 0.0);
}

TEST_CASE("V s >= 1 makes the gap positive for every nonzero profile") {
  Rng rng(41);
  for (int k = 0; k < 20; ++k) {
    const RadialProfile u =
        bump_profile(2, 20.0, 700, rng.uniform(0.3, 2.0), rng.uniform(0.8, 5.0), rng.uniform(0.0, 0.5));
    CHECK(nehari_gap(u, 2.0, 1.0) > 0.0);
    CHECK_THROWS_AS(nehari_project(u, 2.0, 1.0), NoProjectionError);
  }
}

TEST_CASE("the ground state projects to itself") {
  for (const auto& [V, s] : {std::pair{0.5, 0.5}, {0.3, 0.8}}) {
    const GroundState gs = solve_ground_state(V, s, 2);
    const double theta = nehari_project(gs.profile, V, s);
    CHECK(std::abs(theta - 1.0) < 1e-6);
  }
}

namespace {

/// Independent oracle: locate the sign change of tau -> <I'(tau u), tau u>/tau^2
/// by a uniform scan and plain bisection of the bracketing interval.
double scan_theta(const RadialProfile& u, double Vy, double sy) {
  const double quad = u.gradsq() + Vy * u.l2sq();
  auto g = [&](double tau) {
    const double t2 = tau * tau;
    return quad - u.integrate([&](double q) { return t2 * q * q * q * q / (1.0 + sy * t2 * q * q); });
  };
  double lo = 0.0, hi = 0.0;
  const double step = 1e-3;
  for (double tau = step; tau < 1e4; tau += std::max(step, 0.001 * tau)) {
    if (g(tau) < 0.0) {
      hi = tau;
      lo = std::max(step, tau - std::max(step, 0.001 * tau));
      break;
    }
  }
  REQUIRE(hi > 0.0);
  for (int it = 0; it < 300 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("projection against the scan oracle") {
  Rng rng(42);
  int tested = 0;
  while (tested < 8) {
    const RadialProfile u =
        bump_profile(2, 25.0, 900, rng.uniform(0.4, 2.5), rng.uniform(1.5, 5.0), rng.uniform(0.0, 1.0));
    if (nehari_gap(u, 0.5, 0.5) >= 0.0) continue;
    ++tested;
    const double theta = nehari_project(u, 0.5, 0.5);
    const double oracle = scan_theta(u, 0.5, 0.5);
    CHECK(std::abs(theta - oracle) <= 1e-8 * std::max(1.0, oracle));
  }
}

TEST_CASE("the projection map is strictly decreasing in tau") {
  Rng rng(43);
  const RadialProfile u = bump_profile(2, 25.0, 900, 1.0, 3.0, 0.4);
  const double quad = u.gradsq() + 0.5 * u.l2sq();
  auto g = [&](double tau) {
    const double t2 = tau * tau;
    return quad - u.integrate([&](double q) { return t2 * q * q * q * q / (1.0 + 0.5 * t2 * q * q); });
  };
  double prev = g(1e-3);
  for (double tau = 2e-3; tau < 100.0; tau *= 1.3) {
    const double cur = g(tau);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("least-energy characterization on random admissible profiles") {
  const double Vy = 0.5, sy = 0.5;
  const GroundState gs = solve_ground_state(Vy, sy, 2);
  Rng rng(44);
  int accepted = 0;
  while (accepted < 20) {
    const RadialProfile u = bump_profile(2, gs.profile.radius(), 1200, rng.uniform(0.3, 2.5),
                                         rng.uniform(1.2, 6.0), rng.uniform(0.0, 1.5));
    if (nehari_gap(u, Vy, sy) >= 0.0) continue;
    ++accepted;
    const double theta = nehari_project(u, Vy, sy);
    std::vector<double> su(u.size()), sdu(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      su[i] = theta * u.values()[i];
      sdu[i] = theta * u.derivatives()[i];
    }
    const RadialProfile scaled(2, u.radius(), std::move(su), std::move(sdu));
    CHECK(frozen_energy(scaled, Vy, sy) >= gs.energy - 1e-6);
  }
}
