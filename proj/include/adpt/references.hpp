#pragma once

#include <vector>

#include "adpt/plant.hpp"

namespace adpt {

/// Fixed setpoint; all derivatives zero.
ReferenceSignal constant_reference(int order, const Vector& position);

/// x_d(t) = start + rate * t per output. Needs order >= 2 to carry the rate.
ReferenceSignal ramp_reference(int order, const Vector& start,
                               const Vector& rate);

/// x_d(t) = amplitude * sin(omega * t + phase) per output.
ReferenceSignal sine_reference(int order, const Vector& amplitude,
                               double omega, double phase = 0.0);

/// Horizontal circle for a 3-output, second-order plant:
/// [r cos(wt), r sin(wt), height].
ReferenceSignal circle_reference(double radius, double omega, double height);

/// Piecewise-constant setpoints, each held for `dwell` seconds; the last one
/// is held forever. Derivatives are zero everywhere, including at switches.
ReferenceSignal step_sequence_reference(int order,
                                        std::vector<Vector> setpoints,
                                        double dwell);

}  // namespace adpt
