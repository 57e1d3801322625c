// Minimal example: sample the concentration function Sigma on a line through
// a generic field pair and locate its minimum by gradient descent.

#include <cstdio>

#include "satwave/sigma.hpp"

int main() {
  using namespace satwave;

  const auto V = ScalarField::quadratic_well(2, 0.5, 0.15, {0.0, 0.0}, 0.5);
  const auto s = ScalarField::gaussian_bumps(2, 0.85, {{-0.35, 0.4, {0.0, 0.0}}}, 0.5);
  const SigmaMap sm(V, s);

  std::printf("  t      Sigma(t, 0.2)    dSigma/dt\n");
  for (double t = -1.0; t <= 1.01; t += 0.25) {
    const Point y{t, 0.2};
    std::printf("%5.2f   %12.8f   %12.8f\n", t, sm.sigma(y), sm.grad_formula(y)[0]);
  }

  const auto min = sm.find_minimum({0.5, 0.3}, {0.0, 0.0}, 1.5);
  std::printf("minimum near (%.5f, %.5f), Sigma = %.8f, %d iterations\n", min.location[0],
              min.location[1], min.sigma, min.iterations);
  return 0;
}
