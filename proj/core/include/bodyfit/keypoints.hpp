#pragma once

#include <Eigen/Dense>

#include <vector>

namespace bodyfit {

// Sparse 2D keypoints with visibility mask. Keypoint id j corresponds to
// model joint j throughout this project.
struct SparseKeypointSet {
  std::vector<int> ids;
  Eigen::MatrixX2d positions;     // J x 2, pixels
  std::vector<bool> visibility;   // mu

  int size() const { return static_cast<int>(ids.size()); }
};

// An image point with its dense-correspondence coordinate.
struct DenseKeypoint {
  double x = 0, y = 0;  // pixels
  int part = 0;         // I, 1..P
  double u = 0, v = 0;  // [0,255]
};

}  // namespace bodyfit
