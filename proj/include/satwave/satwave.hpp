#pragma once

#include "satwave/config.hpp"
#include "satwave/diagnostics.hpp"
#include "satwave/eps_solver.hpp"
#include "satwave/errors.hpp"
#include "satwave/ground_state.hpp"
#include "satwave/io.hpp"
#include "satwave/penalization.hpp"
#include "satwave/presets.hpp"
#include "satwave/radial_profile.hpp"
#include "satwave/saturable.hpp"
#include "satwave/scalar_field.hpp"
#include "satwave/sigma.hpp"
#include "satwave/vecmath.hpp"
