#include "bodyfit/camera.hpp"

namespace bodyfit {

Eigen::Vector2d project_point(const Eigen::Vector3d& point, const CameraParams& cam,
                              const ImageFrame& frame) {
  const double nx = cam.f * point.x() + cam.tx;
  const double ny = cam.f * point.y() + cam.ty;
  return {(nx + 1.0) * 0.5 * (frame.width - 1),
          (ny + 1.0) * 0.5 * (frame.height - 1)};
}

Eigen::MatrixX2d project(const Eigen::MatrixX3d& points, const CameraParams& cam,
                         const ImageFrame& frame) {
  const double sx = 0.5 * (frame.width - 1);
  const double sy = 0.5 * (frame.height - 1);
  Eigen::MatrixX2d out(points.rows(), 2);
  out.col(0) = ((cam.f * points.col(0)).array() + cam.tx + 1.0) * sx;
  out.col(1) = ((cam.f * points.col(1)).array() + cam.ty + 1.0) * sy;
  return out;
}

void project_backward(const Eigen::MatrixX3d& points, const CameraParams& cam,
                      const ImageFrame& frame, const Eigen::MatrixX2d& dpixels,
                      Eigen::MatrixX3d& dpoints, Eigen::Vector3d& dcam) {
  const double sx = 0.5 * (frame.width - 1);
  const double sy = 0.5 * (frame.height - 1);
  dpoints.col(0) += cam.f * sx * dpixels.col(0);
  dpoints.col(1) += cam.f * sy * dpixels.col(1);
  dcam[0] += sx * dpixels.col(0).dot(points.col(0)) +
             sy * dpixels.col(1).dot(points.col(1));
  dcam[1] += sx * dpixels.col(0).sum();
  dcam[2] += sy * dpixels.col(1).sum();
}

}  // namespace bodyfit
