#pragma once

#include <Eigen/Dense>

namespace bodyfit {

// Weak-perspective camera: normalized p = f*(x,y) + (tx,ty), z dropped.
struct CameraParams {
  double f = 1.0;
  double tx = 0.0;
  double ty = 0.0;
};

struct ImageFrame {
  int width = 224;
  int height = 224;
};

// Normalized coordinates map to pixels with (-1,-1) at the top-left pixel
// center: px = (p_x+1)/2*(width-1), py = (p_y+1)/2*(height-1).
Eigen::Vector2d project_point(const Eigen::Vector3d& point, const CameraParams& cam,
                              const ImageFrame& frame);

Eigen::MatrixX2d project(const Eigen::MatrixX3d& points, const CameraParams& cam,
                         const ImageFrame& frame);

// Accumulates d(loss)/d(points) and d(loss)/d(f,tx,ty) given d(loss)/d(pixels).
void project_backward(const Eigen::MatrixX3d& points, const CameraParams& cam,
                      const ImageFrame& frame, const Eigen::MatrixX2d& dpixels,
                      Eigen::MatrixX3d& dpoints, Eigen::Vector3d& dcam);

}  // namespace bodyfit
