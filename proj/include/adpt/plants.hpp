#pragma once

#include "adpt/plant.hpp"

namespace adpt {

/// xdot = a x + b u.
CanonicalPlant scalar_linear_plant(double a, double b = 1.0);

/// xddot = u.
CanonicalPlant double_integrator_plant();

}  // namespace adpt
