#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "satwave/radial_profile.hpp"
#include "test_util.hpp"

using namespace satwave;
using satwave::testing::Rng;

TEST_CASE("quadrature of 1 reproduces the ball volume") {
  Rng rng(31);
  for (const int dim : {2, 3, 4}) {
    for (int k = 0; k < 8; ++k) {
      const int M = 2 * (8 + static_cast<int>(rng.uniform(0, 400)));
      const double R = rng.uniform(0.5, 20.0);
      RadialProfile p(dim, R, std::vector<double>(M + 1, 1.0));
      const double vol = RadialProfile::unit_sphere_area(dim) * std::pow(R, dim) / dim;
      CHECK(p.integrate([](double) { return 1.0; }) == Catch::Approx(vol).epsilon(1e-8));
    }
  }
}

TEST_CASE("unit sphere areas") {
  CHECK(RadialProfile::unit_sphere_area(2) == Catch::Approx(2.0 * M_PI));
  CHECK(RadialProfile::unit_sphere_area(3) == Catch::Approx(4.0 * M_PI));
}

TEST_CASE("gaussian integrals against closed forms") {
  // int_{R^2} exp(-r^2) = pi, int_{R^2} r^2 exp(-r^2) = pi (both truncated at R=12)
  const int M = 4096;
  const double R = 12.0;
  std::vector<double> u(M + 1), du(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double r = R * i / M;
    u[i] = std::exp(-0.5 * r * r);  // u^2 = exp(-r^2)
    du[i] = -r * u[i];
  }
  RadialProfile p(2, R, u, du);
  CHECK(p.l2sq() == Catch::Approx(M_PI).epsilon(1e-10));
  CHECK(p.gradsq() == Catch::Approx(M_PI).epsilon(1e-10));
  // centered differences agree to second order
  CHECK(p.gradsq_fd() == Catch::Approx(M_PI).epsilon(1e-5));
}

TEST_CASE("interpolation and basic accessors") {
  RadialProfile p = satwave::testing::bump_profile(2, 10.0, 1000, 2.0, 3.0, 0.0);
  CHECK(p.value_at(0.0) == Catch::Approx(2.0));
  CHECK(p.value_at(3.0) == Catch::Approx(2.0 * std::exp(-1.0)).epsilon(1e-4));
  CHECK(p.value_at(11.0) == 0.0);  // beyond truncation
  CHECK(p.spacing() == Catch::Approx(0.01));
  CHECK(p.r(100) == Catch::Approx(1.0));
  CHECK(p.has_derivatives());
}

TEST_CASE("construction requirements") {
  CHECK_THROWS_AS(RadialProfile(1, 1.0, std::vector<double>(11, 0.0)), Error);   // dim < 2
  CHECK_THROWS_AS(RadialProfile(2, -1.0, std::vector<double>(11, 0.0)), Error);  // bad radius
  CHECK_THROWS_AS(RadialProfile(2, 1.0, std::vector<double>(10, 0.0)), Error);   // even sample count
  CHECK_THROWS_AS(RadialProfile(2, 1.0, std::vector<double>(11, 0.0), std::vector<double>(9, 0.0)),
                  Error);  // derivative length mismatch
}
