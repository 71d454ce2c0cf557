#pragma once

#include "bodyfit/body_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace bodyfit {

// A surface point expressed as a face plus barycentric weights.
struct DenseAnchor {
  std::array<int, 3> vertices{};
  Eigen::Vector3d weights{0, 0, 0};  // non-negative, sum to 1
};

// Per-part index of the template's UV triangles, the domain of the
// (I,U,V) -> surface mapping.
struct UVAtlas {
  static constexpr int kGridCells = 8;

  struct PartIndex {
    std::vector<int> faces;  // all faces of this part, ascending
    std::array<std::vector<int>, kGridCells * kGridCells> cells;
  };

  int part_count = 0;
  std::vector<int> face_part;                           // F
  std::vector<std::array<Eigen::Vector2d, 3>> face_uv;  // F
  Eigen::Matrix<int, Eigen::Dynamic, 3> faces;          // F x 3 vertex ids
  std::vector<PartIndex> parts;                         // index 0 unused
};

// Errors on a degenerate UV triangle, naming the face.
UVAtlas build_atlas(const BodyModel& model);

// Resolves (I,U,V) to the containing UV triangle of part I, or clamps to the
// closest one when the point lies outside every triangle of the part.
DenseAnchor phi_lookup(const UVAtlas& atlas, int part, double u, double v);

}  // namespace bodyfit
