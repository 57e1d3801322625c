#pragma once

#include <string>
#include <vector>

#include "satwave/errors.hpp"

namespace satwave {

/// Built-in run configurations covering the three standard experiment
/// layouts: concentric wells (V and s share a strict minimum at the ball
/// center), constant V with a varying s, and a pair whose gradients point in
/// the same direction away from the center (the necessary-condition
/// violation demo).
inline const char* preset_concentric_wells = R"(# concentric-wells preset
# V and s are radial wells with a common strict minimum at the origin.
schema = 1
seed = 1

solver.N = 2
solver.domain = 5.0
solver.radial = auto
solver.points_per_eps = 16
solver.eps_list = 0.5, 0.25, 0.125, 0.0625

fields.V.kind = gaussian-bump-sum
fields.V.params = 0.8, -0.3, 0.05, 0.0, 0.0
fields.V.floor = 0.5
fields.s.kind = gaussian-bump-sum
fields.s.params = 0.8, -0.3, 0.05, 0.0, 0.0
fields.s.floor = 0.5

ball.z = 0.0, 0.0
ball.r = 1.5
penalization.nu = 0.25

groundstate.y = 0.0, 0.0
sigma_map.min = -1.5, -1.5
sigma_map.max = 1.5, 1.5
sigma_map.npts = 13, 13
check.points = 0.0, 0.0
)";

inline const char* preset_constant_v = R"(# constant-V-varying-s preset
# V is constant; concentration is driven by the minimum of s alone.
schema = 1
seed = 1

solver.N = 2
solver.domain = 5.0
solver.radial = auto
solver.points_per_eps = 16
solver.eps_list = 0.5, 0.25, 0.125, 0.0625

fields.V.kind = constant
fields.V.params = 0.6
fields.V.floor = 0.6
fields.s.kind = gaussian-bump-sum
fields.s.params = 0.9, -0.4, 0.05, 0.0, 0.0
fields.s.floor = 0.5

ball.z = 0.0, 0.0
ball.r = 1.5
penalization.nu = 0.25

groundstate.y = 0.0, 0.0
sigma_map.min = -1.5, -1.5
sigma_map.max = 1.5, 1.5
sigma_map.npts = 13, 13
check.points = 0.0, 0.0
)";

inline const char* preset_same_direction = R"(# same-direction-gradients preset
# Quadratic-well V and Gaussian-rise s share the center, so away from it
# grad V and grad s are parallel and point in the same direction: the
# necessary-condition identity cannot vanish there.
schema = 1
seed = 1

solver.N = 2
solver.domain = 5.0
solver.radial = auto
solver.points_per_eps = 16
solver.eps_list = 0.5, 0.25, 0.125

fields.V.kind = quadratic-well
fields.V.params = 0.5, 0.15, 0.0, 0.0
fields.V.floor = 0.5
fields.s.kind = gaussian-bump-sum
fields.s.params = 0.85, -0.35, 0.4, 0.0, 0.0
fields.s.floor = 0.5

ball.z = 0.0, 0.0
ball.r = 1.5
penalization.nu = 0.25

groundstate.y = 0.5, 0.3
sigma_map.min = -1.0, -1.0
sigma_map.max = 1.0, 1.0
sigma_map.npts = 11, 11
sigma_map.search = true
sigma_map.seed_point = 0.5, 0.3
check.points = 0.0, 0.0 ; 0.5, 0.3
)";

inline std::vector<std::string> preset_names() {
  return {"concentric-wells", "constant-V-varying-s", "same-direction-gradients"};
}

inline const char* preset_text(const std::string& name) {
  if (name == "concentric-wells") return preset_concentric_wells;
  if (name == "constant-V-varying-s") return preset_constant_v;
  if (name == "same-direction-gradients") return preset_same_direction;
  throw ConfigError("unknown preset '" + name + "' (available: concentric-wells, constant-V-varying-s, same-direction-gradients)");
}

}  // namespace satwave
