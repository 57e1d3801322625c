#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "satwave/ground_state.hpp"
#include "test_util.hpp"

using namespace satwave;
using satwave::testing::Rng;

TEST_CASE("existence dichotomy") {
  CHECK_THROWS_AS(solve_ground_state(2.0, 1.0, 2), NotInOmegaError);
  CHECK_THROWS_AS(solve_ground_state(1.0, 1.0, 2), NotInOmegaError);  // boundary excluded
  CHECK_NOTHROW(solve_ground_state(0.9, 0.9, 2));
}

TEST_CASE("reference solve at V=s=0.5 in dimension 2") {
  const GroundState gs = solve_ground_state(0.5, 0.5, 2);

  SECTION("profile is positive, decreasing, and truncated cleanly") {
    const auto& u = gs.profile.values();
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(u[i] > 0.0);
      if (i > 0) CHECK(u[i] <= u[i - 1] + 1e-13 * gs.amplitude);
    }
    CHECK(u.back() < 1e-8 * gs.amplitude);
  }

  SECTION("first-order conditions") {
    const double scale = gs.gradsq + gs.Vy * gs.l2sq;
    CHECK(std::abs(gs.nehari_residual) < 1e-7 * scale);
    CHECK(gs.pohozaev_residual < 1e-4 * (gs.gradsq + gs.l2sq));
  }

  SECTION("amplitude exceeds the zero-energy crossing") {
    // W(a) = F(a) - V a^2 / 2 must be positive at the shooting amplitude
    CHECK(F_primitive(gs.sy, gs.amplitude) > 0.5 * gs.Vy * gs.amplitude * gs.amplitude);
  }
}

TEST_CASE("refinement oracle: doubling the grid moves the energy very little") {
  ShootingOptions coarse;
  const GroundState a = solve_ground_state(0.5, 0.5, 2, coarse);
  ShootingOptions fine = coarse;
  fine.samples *= 2;
  const GroundState b = solve_ground_state(0.5, 0.5, 2, fine);
  CHECK(std::abs(a.energy - b.energy) / std::abs(b.energy) < 1e-6);
  CHECK(std::abs(a.l2sq - b.l2sq) / b.l2sq < 1e-6);
}

TEST_CASE("grid convergence under halving") {
  ShootingOptions opts;
  const GroundState ref = solve_ground_state(0.5, 0.5, 2, opts);
  ShootingOptions half = opts;
  half.samples /= 2;
  const GroundState c = solve_ground_state(0.5, 0.5, 2, half);
  CHECK(std::abs(ref.energy - c.energy) / std::abs(ref.energy) < 1e-5);
  CHECK(std::abs(ref.l2sq - c.l2sq) / ref.l2sq < 1e-5);
}

TEST_CASE("pohozaev residual is second-order small and quadrature-limited") {
  // coarse grids keep the quadrature term above the integrator noise floor
  ShootingOptions o1;
  o1.samples = 512;
  ShootingOptions o2;
  o2.samples = 1024;
  for (const auto& [V, s] : {std::pair{0.5, 0.5}, {0.3, 0.8}, {0.9, 0.9}}) {
    const GroundState g1 = solve_ground_state(V, s, 2, o1);
    const GroundState g2 = solve_ground_state(V, s, 2, o2);
    CAPTURE(V, s, g1.pohozaev_residual, g2.pohozaev_residual);
    CHECK(g1.pohozaev_residual < 1e-4 * (g1.gradsq + g1.l2sq));
    CHECK(g1.pohozaev_residual / g2.pohozaev_residual >= 4.0);
  }
}

TEST_CASE("dimension-2 identity: residual reduces to V||Q||^2 - 2 int F") {
  const GroundState gs = solve_ground_state(0.6, 0.7, 2);
  const double fint = gs.profile.integrate([&](double q) { return F_primitive(gs.sy, q); });
  CHECK(gs.pohozaev_residual == Catch::Approx(std::abs(gs.Vy * gs.l2sq - 2.0 * fint)).margin(1e-14));
}

TEST_CASE("three-dimensional solve") {
  const GroundState gs = solve_ground_state(0.5, 0.5, 3);
  CHECK(gs.pohozaev_residual < 1e-4 * (gs.gradsq + gs.l2sq));
  CHECK(std::abs(gs.nehari_residual) < 1e-6 * (gs.gradsq + gs.Vy * gs.l2sq));
  CHECK(gs.profile.values().back() < 1e-8 * gs.amplitude);
}

TEST_CASE("frozen problem depends on y only through (V(y), s(y))") {
  const auto V = ScalarField::constant(2, 0.5, 0.5);
  const auto s = ScalarField::constant(2, 0.5, 0.5);
  const GroundState a = solve_ground_state(V, s, {0.0, 0.0});
  const GroundState b = solve_ground_state(V, s, {3.0, -7.0});
  CHECK(a.energy == b.energy);
  CHECK(a.amplitude == b.amplitude);
  CHECK(a.profile.values() == b.profile.values());
}

TEST_CASE("monotone dependence on the frozen values") {
  const double base = solve_ground_state(0.5, 0.5, 2).energy;
  CHECK(solve_ground_state(0.55, 0.5, 2).energy > base);
  CHECK(solve_ground_state(0.5, 0.55, 2).energy > base);
}

TEST_CASE("frozen energy") {
  SECTION("zero profile has zero energy") {
    RadialProfile zero(2, 10.0, std::vector<double>(101, 0.0));
    CHECK(frozen_energy(zero, 0.5, 0.5) == 0.0);
  }
  SECTION("dropping F leaves the nonnegative quadratic part") {
    const RadialProfile u = satwave::testing::bump_profile(2, 12.0, 600, 1.5, 2.0, 0.3);
    CHECK(0.5 * u.gradsq_fd() + 0.25 * u.l2sq() >= 0.0);
    // and the full energy is below the quadratic part (F >= 0)
    CHECK(frozen_energy(u, 0.5, 0.5) <= 0.5 * u.gradsq_fd() + 0.25 * u.l2sq());
  }
}

TEST_CASE("error paths of the shooting solver") {
  SECTION("scan range too low to bracket") {
    ShootingOptions o;
    o.scan_hi = 2e-3;  // every scanned amplitude undershoots
    CHECK_THROWS_AS(solve_ground_state(0.5, 0.5, 2, o), BracketNotFoundError);
  }
  SECTION("truncation radius too small") {
    ShootingOptions o;
    o.radius_factor = 3.0;  // the profile cannot decay to the matching level by r = R
    CHECK_THROWS_AS(solve_ground_state(0.5, 0.5, 2, o), TruncationTooSmallError);
  }
  SECTION("tail tolerance stricter than the truncation allows") {
    ShootingOptions o;
    o.tail_tol = 1e-30;
    CHECK_THROWS_AS(solve_ground_state(0.5, 0.5, 2, o), TruncationTooSmallError);
  }
  SECTION("dimension 1 rejected") { CHECK_THROWS_AS(solve_ground_state(0.5, 0.5, 1), Error); }
}

TEST_CASE("field wrapper rejects points outside the existence region") {
  const auto V = ScalarField::quadratic_well(2, 0.5, 0.5, {0.0, 0.0}, 0.5);
  const auto s = ScalarField::constant(2, 1.0, 1.0);
  CHECK_THROWS_AS(solve_ground_state(V, s, {2.0, 0.0}), NotInOmegaError);
  const GroundState gs = solve_ground_state(V, s, {0.5, 0.0});
  CHECK(gs.y == Point{0.5, 0.0});
  CHECK(gs.Vy == Catch::Approx(0.625));
}
