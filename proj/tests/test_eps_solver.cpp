#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "satwave/eps_solver.hpp"
#include "test_util.hpp"

using namespace satwave;

namespace {

EpsProblem concentric(double eps, bool radial = true, double extent = 5.0) {
  const auto V = ScalarField::gaussian_bumps(2, 0.8, {{-0.3, 0.05, {0.0, 0.0}}}, 0.5);
  const auto s = ScalarField::gaussian_bumps(2, 0.8, {{-0.3, 0.05, {0.0, 0.0}}}, 0.5);
  PenalizedNonlinearity pen({0.0, 0.0}, 1.2, 1.5, 0.25, 0.5);
  EpsProblem p{eps, 2, radial, extent, 0, V, s, pen};
  return p.with_epsilon(eps);
}

}  // namespace

TEST_CASE("problem validation") {
  SECTION("grid must resolve the eps scale") {
    EpsProblem p = concentric(0.25);
    p.intervals = 40;  // h = 0.125 > eps/4
    CHECK_THROWS_AS(p.validate(), Error);
  }
  SECTION("ball must sit well inside the domain") {
    EpsProblem p = concentric(0.25, true, 4.0);  // extent < 3 r = 4.5
    CHECK_THROWS_AS(p.validate(), Error);
  }
  SECTION("radial path demands concentric radial data") {
    EpsProblem p = concentric(0.25);
    p.V = ScalarField::quadratic_well(2, 0.5, 0.1, {0.5, 0.0}, 0.5);
    CHECK_THROWS_AS(p.validate(), Error);
  }
}

TEST_CASE("zero guess collapses to the trivial critical point") {
  const EpsProblem p = concentric(0.25);
  GridSolution zero;
  zero.epsilon = p.epsilon;
  zero.dim = p.dim;
  zero.radial = true;
  zero.extent = p.extent;
  zero.intervals = p.intervals;
  zero.values.assign(p.intervals + 1, 0.0);
  CHECK_THROWS_AS(solve_penalized(p, zero), ConvergedToZeroError);
}

TEST_CASE("radial solve: residual, positivity, energy consistency") {
  const EpsProblem p = concentric(0.25);
  const GridSolution sol = solve_penalized(p, initial_guess(p));
  CHECK(sol.converged);
  CHECK(sol.residual_norm < p.newton_tol);
  CHECK(sol.min_value >= -1e-10);
  CHECK(sol.max_value() > 1.0);

  // J_eps from quadrature equals 1/2 <A_h u, u>_w - sum_i w_i G_i exactly
  const detail::RadialEpsOperator op(p);
  std::vector<double> au;
  op.linear_apply(sol.values, au);
  double quad = 0.0, gsum = 0.0;
  const auto& w = op.node_weights();
  for (int i = 0; i < op.unknowns(); ++i) {
    quad += w[i] * au[i] * sol.values[i];
    Point x = p.pen.center();
    x[0] += p.spacing() * i;
    gsum += w[i] * p.pen.G(x, p.s(x), sol.values[i]);
  }
  CHECK(std::abs(sol.energy - (0.5 * quad - gsum)) < 1e-8 * (1.0 + std::abs(sol.energy)));
}

TEST_CASE("spike guess carries the frozen energy in the small-eps limit") {
  const GroundState Qz = solve_ground_state(0.5, 0.5, 2);
  const EpsProblem p = concentric(0.0625);
  const GridSolution guess = initial_guess(p, Qz);
  const detail::RadialEpsOperator op(p);
  const double rescaled = op.energy(guess.values) / (p.epsilon * p.epsilon);
  CHECK(std::abs(rescaled - Qz.energy) / Qz.energy < 0.02);
}

TEST_CASE("one-entry sweep equals a direct solve") {
  const EpsProblem p = concentric(0.25);
  const auto sweep = continuation_sweep(p, {0.25});
  REQUIRE(sweep.size() == 1);
  const GroundState Qz = solve_ground_state(p.V, p.s, p.pen.center());
  const GridSolution direct = solve_penalized(p, initial_guess(p, Qz));
  CHECK(sweep[0].values == direct.values);
  CHECK(sweep[0].energy == direct.energy);
}

TEST_CASE("eps-halving sweep: warm starts converge and energies settle") {
  const EpsProblem base = concentric(0.5);
  const auto sweep = continuation_sweep(base, {0.5, 0.25, 0.125, 0.0625});
  REQUIRE(sweep.size() == 4);
  const double sigma_z = solve_ground_state(0.5, 0.5, 2).energy;
  double prev_gap = 1e9;
  for (const auto& sol : sweep) {
    CHECK(sol.converged);
    CHECK(sol.residual_norm < base.newton_tol);
    const double gap = std::abs(sol.rescaled_energy - sigma_z);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  EpsProblem smallest = base.with_epsilon(0.0625);
  CHECK_FALSE(penalization_active(sweep.back(), smallest));
}

TEST_CASE("penalization activity detection") {
  const EpsProblem p = concentric(0.25);
  GridSolution sol;
  sol.epsilon = p.epsilon;
  sol.dim = 2;
  sol.radial = true;
  sol.extent = p.extent;
  sol.intervals = p.intervals;

  SECTION("identically zero outside the ball") {
    sol.values.assign(p.intervals + 1, 0.0);
    sol.values[0] = 1.0;  // inside
    CHECK_FALSE(penalization_active(sol, p));
  }
  SECTION("large values outside the ball trip the flag") {
    sol.values.assign(p.intervals + 1, 0.0);
    const int i_out = static_cast<int>(std::ceil(2.0 / p.spacing()));  // r = 2 > 1.5
    sol.values[i_out] = 1.0;  // far above the switch amplitude (~0.37)
    CHECK(penalization_active(sol, p));
  }
}

TEST_CASE("radial path in three dimensions") {
  const auto V = ScalarField::gaussian_bumps(3, 0.8, {{-0.3, 0.05, {0.0, 0.0, 0.0}}}, 0.5);
  const auto s = ScalarField::gaussian_bumps(3, 0.8, {{-0.3, 0.05, {0.0, 0.0, 0.0}}}, 0.5);
  PenalizedNonlinearity pen({0.0, 0.0, 0.0}, 1.2, 1.5, 0.25, 0.5);
  EpsProblem p{0.5, 3, true, 5.0, 0, V, s, pen};
  p = p.with_epsilon(0.5);
  const GridSolution sol = solve_penalized(p, initial_guess(p));
  CHECK(sol.converged);
  CHECK(sol.residual_norm < p.newton_tol);
  CHECK(sol.min_value >= -1e-10);
  // rescaled energy sits near the frozen level already at this eps
  const double sigma_z = solve_ground_state(0.5, 0.5, 3).energy;
  CHECK(std::abs(sol.rescaled_energy - sigma_z) / sigma_z < 0.2);
}

TEST_CASE("box solver agrees with the radial fast path at matched resolution") {
  const double eps = 0.3;
  const auto V = ScalarField::gaussian_bumps(2, 0.8, {{-0.3, 0.05, {0.0, 0.0}}}, 0.5);
  const auto s = ScalarField::gaussian_bumps(2, 0.8, {{-0.3, 0.05, {0.0, 0.0}}}, 0.5);
  PenalizedNonlinearity pen({0.0, 0.0}, 0.8, 1.0, 0.25, 0.5);

  EpsProblem pr{eps, 2, true, 3.0, 0, V, s, pen};
  pr.points_per_eps = 8.0;
  pr = pr.with_epsilon(eps);
  const GridSolution solr = solve_penalized(pr, initial_guess(pr));

  EpsProblem pb{eps, 2, false, 3.0, 0, V, s, pen};
  pb.points_per_eps = 8.0;
  pb = pb.with_epsilon(eps);
  const GridSolution solb = solve_penalized(pb, initial_guess(pb));

  CHECK(solb.converged);
  CHECK(solb.min_value >= -1e-10);
  CHECK(std::abs(solr.max_value() - solb.max_value()) / solr.max_value() < 1e-3);
  CHECK(std::abs(solr.rescaled_energy - solb.rescaled_energy) / std::abs(solr.rescaled_energy) < 5e-3);

  // box energy consistency against the assembled quadratic form
  const detail::BoxEpsOperator op(pb);
  std::vector<double> au;
  op.linear_apply(solb.values, au);
  const auto w = op.node_weights();
  double quad = 0.0, gsum = 0.0;
  const auto& interior = op.interior();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const std::size_t f = interior[k];
    quad += w[k] * au[k] * solb.values[f];
    const Point x = solb.node_point(f, Point(2, 0.0));
    gsum += w[k] * pb.pen.G(x, pb.s(x), solb.values[f]);
  }
  CHECK(std::abs(solb.energy - (0.5 * quad - gsum)) < 1e-8 * (1.0 + std::abs(solb.energy)));
}
