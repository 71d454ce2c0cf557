#pragma once

#include <Eigen/Dense>

#include <array>

namespace bodyfit {

// Axis-angle (radians, rotation by |omega| about omega/|omega|) to rotation
// matrix. |omega| < 1e-8 takes a first-order series branch so the T-pose
// initialization never divides by zero.
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& omega);

// d(rodrigues)/d(omega): one 3x3 matrix per input component.
// Series coefficients below |omega| = 1e-2 avoid catastrophic cancellation
// in the trig form.
std::array<Eigen::Matrix3d, 3> rodrigues_derivative(const Eigen::Vector3d& omega);

// [v]x, the cross-product matrix.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

}  // namespace bodyfit
