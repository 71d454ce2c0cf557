#include "bodyfit/rotation.hpp"

#include <cmath>

namespace bodyfit {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d w = skew(omega);
  if (theta < 1e-8) {
    return Eigen::Matrix3d::Identity() + w;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Eigen::Matrix3d::Identity() + a * w + b * (w * w);
}

std::array<Eigen::Matrix3d, 3> rodrigues_derivative(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const double t2 = theta * theta;
  const Eigen::Matrix3d w = skew(omega);
  const Eigen::Matrix3d w2 = w * w;

  // R = I + a*[w] + b*[w]^2 with a = sin(t)/t, b = (1-cos(t))/t^2.
  // dR/dw_i = ca*w_i*[w] + a*[e_i] + cb*w_i*[w]^2 + b*([e_i][w] + [w][e_i])
  // where ca = a'(t)/t, cb = b'(t)/t.
  double a, b, ca, cb;
  if (theta < 1e-2) {
    const double t4 = t2 * t2;
    a = 1.0 - t2 / 6.0 + t4 / 120.0;
    b = 0.5 - t2 / 24.0 + t4 / 720.0;
    ca = -1.0 / 3.0 + t2 / 30.0 - t4 / 840.0;
    cb = -1.0 / 12.0 + t2 / 180.0 - t4 / 6720.0;
  } else {
    const double s = std::sin(theta), c = std::cos(theta);
    a = s / theta;
    b = (1.0 - c) / t2;
    ca = (theta * c - s) / (t2 * theta);
    cb = (theta * s - 2.0 * (1.0 - c)) / (t2 * t2);
  }

  std::array<Eigen::Matrix3d, 3> deriv;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix3d ei = skew(Eigen::Vector3d::Unit(i));
    deriv[i] = ca * omega[i] * w + a * ei + cb * omega[i] * w2 +
               b * (ei * w + w * ei);
  }
  return deriv;
}

}  // namespace bodyfit
