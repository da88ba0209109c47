#pragma once

#include <span>
#include <vector>

#include "scanstress/frame.hpp"

namespace scanstress {

// True when the buffer has a sample at or before t0 and one at or after t1.
bool imu_covers(std::span<const ImuSample> buffer, double t0, double t1);

// Trapezoidal integration over [t0, t1] with endpoint values obtained by
// linear interpolation: v = v0 + integral of linear acceleration, omega =
// time-weighted trapezoidal mean of angular velocity. Exact on
// piecewise-linear signals aligned with the samples. Throws EvalError when
// the buffer is empty, unsorted, does not cover the window, or t1 <= t0.
MotionEstimate estimate_velocity(std::span<const ImuSample> buffer, double t0, double t1,
                                 const Eigen::Vector3d& v0);

}  // namespace scanstress
