// Minimal example: solve the frozen ground state for a few parameter pairs
// and print profile samples plus the invariants a solution must satisfy.

#include <cstdio>

#include "satwave/ground_state.hpp"

int main() {
  using namespace satwave;

  for (const auto& [V, s] : {std::pair{0.5, 0.5}, {0.3, 0.8}, {0.9, 0.9}}) {
    const GroundState gs = solve_ground_state(V, s, 2);
    std::printf("V=%.2f s=%.2f  Q(0)=%.6f  energy=%.8f  nehari=%.2e  pohozaev=%.2e\n", V, s,
                gs.amplitude, gs.energy, gs.nehari_residual, gs.pohozaev_residual);
    for (double r : {0.0, 1.0, 2.0, 4.0, 8.0})
      std::printf("    Q(%4.1f) = %.8f\n", r, gs.profile.value_at(r));
  }
  return 0;
}
