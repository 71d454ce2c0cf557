#pragma once

#include "bodyfit/camera.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace bodyfit {

// Linear-blend-skinned parametric body model: template mesh, PCA shape basis,
// kinematic tree, skinning weights, joint regressor and the per-vertex
// (part, u, v) surface atlas.
struct BodyModel {
  int vertex_count = 0;  // V
  int joint_count = 0;   // K_total (articulated joints + root)
  int shape_dim = 0;     // B
  int part_count = 0;    // P

  Eigen::MatrixX3d template_vertices;                 // V x 3
  Eigen::Matrix<int, Eigen::Dynamic, 3> faces;        // F x 3
  std::vector<Eigen::MatrixX3d> shape_dirs;           // B entries, each V x 3
  Eigen::MatrixXd joint_regressor;                    // K x V, rows sum to 1
  Eigen::MatrixXd skin_weights;                       // V x K, rows sum to 1
  std::vector<int> parents;                           // K, parents[0] = -1
  Eigen::MatrixX3d vertex_iuv;                        // V x (part, u, v)

  int face_count() const { return static_cast<int>(faces.rows()); }
  int face_part(int f) const {
    return static_cast<int>(vertex_iuv(faces(f, 0), 0));
  }
};

// The optimization vector: per-joint axis-angle pose (root entry is the
// global rotation), PCA shape coefficients, weak-perspective camera.
struct FullParams {
  Eigen::VectorXd pose;   // 3 * K_total
  Eigen::VectorXd shape;  // B
  CameraParams camera;

  int dim() const { return static_cast<int>(pose.size() + shape.size()) + 3; }
  Eigen::VectorXd to_vector() const;
  static FullParams from_vector(const Eigen::VectorXd& v, int joint_count,
                                int shape_dim);
};

struct MeshInstance {
  Eigen::MatrixX3d vertices;  // V x 3, posed
  Eigen::MatrixX3d joints3d;  // K x 3, regressed from posed vertices
};

// Forward-pass intermediates retained for the analytic backward pass.
struct PosedMesh {
  Eigen::MatrixX3d shaped;       // V x 3, template + shape blend
  Eigen::MatrixX3d rest_joints;  // K x 3, regressed from shaped
  std::vector<Eigen::Matrix3d> local_rot;
  std::vector<Eigen::Matrix3d> global_rot;
  Eigen::MatrixX3d joint_pos;    // K x 3, posed joint origins
  MeshInstance mesh;
};

// Throws std::runtime_error naming the offending field on any invariant
// violation.
void validate_model(const BodyModel& model);

BodyModel load_model(const std::string& path);
void save_model(const std::string& path, const BodyModel& model);

MeshInstance pose_mesh(const BodyModel& model, const FullParams& params);
PosedMesh pose_mesh_cached(const BodyModel& model, const FullParams& params);

// Accumulates d(loss)/d(pose) and d(loss)/d(shape) from gradients w.r.t. the
// posed vertices and regressed joints. Also returns the gradient w.r.t. each
// local rotation matrix in `dlocal_rot` when non-null callers want to add
// rotation-space loss terms before the Rodrigues chain; pass extra
// contributions through `extra_dlocal_rot` (may be empty).
void pose_mesh_backward(const BodyModel& model, const FullParams& params,
                        const PosedMesh& cache, const Eigen::MatrixX3d& dvertices,
                        const Eigen::MatrixX3d& djoints,
                        const std::vector<Eigen::Matrix3d>& extra_dlocal_rot,
                        Eigen::VectorXd& dpose, Eigen::VectorXd& dshape);

}  // namespace bodyfit
