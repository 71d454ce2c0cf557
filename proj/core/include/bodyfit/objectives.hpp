#pragma once

#include "bodyfit/body_model.hpp"
#include "bodyfit/iuv_map.hpp"
#include "bodyfit/keypoints.hpp"
#include "bodyfit/uv_atlas.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace bodyfit {

// Everything a single image may supervise a fit with. Empty dense list means
// no dense supervision.
struct AnnotationBundle {
  std::optional<FullParams> gt_params;  // camera entries ignored by the loss
  std::optional<Eigen::MatrixX3d> gt_joints3d;
  std::optional<SparseKeypointSet> sparse2d;
  std::vector<DenseKeypoint> dense;
  ImageFrame frame;

  bool has_any() const {
    return gt_params.has_value() || gt_joints3d.has_value() ||
           sparse2d.has_value() || !dense.empty();
  }
};

struct LossWeights {
  double lambda_3d = 10.0;
  double lambda_2d = 1.0;
  double lambda_dense = 10.0;
  bool use_pose = true;    // gates the rotation term of the parameter loss
  bool use_shape = true;   // gates the shape term
};

struct LossBreakdown {
  double l3d_joints = 0;  // unweighted term values
  double l_smpl = 0;
  double l2d = 0;
  double l_dense = 0;
  double total = 0;
  Eigen::VectorXd gradient;  // w.r.t. [pose | shape | camera]
};

struct MetricReport {
  double pve = 0;    // model units
  double mpjpe = 0;  // model units
  double pve_t = 0;  // model units
  double dkd = 0;    // pixels
};

struct MetricOptions {
  bool align_root = true;  // root-joint translation alignment for PVE/MPJPE
};

// --- individual loss terms -------------------------------------------------

struct Loss3dResult {
  double joints_value = 0;
  double smpl_value = 0;
  Eigen::MatrixX3d djoints3d;              // K x 3
  std::vector<Eigen::Matrix3d> dlocal_rot; // K, gradient w.r.t. R(theta_k)
  Eigen::VectorXd dshape;                  // B
};

// Sum over joints of |J3D - gt|_2 plus the parameter loss
// sum_k |R(theta_k)-R(gt_k)|_F + |beta-gt|_2, pose/shape terms gated by the
// weight toggles. Requires gt_joints3d or gt_params.
Loss3dResult loss_3d(const MeshInstance& mesh, const FullParams& params,
                     const AnnotationBundle& ann, const LossWeights& weights);

struct Loss2dResult {
  double value = 0;
  Eigen::MatrixX2d dpixels;  // J x 2
};

// Visibility-masked L1 on projected joints; subgradient at kinks is 0.
Loss2dResult loss_2d(const Eigen::MatrixX2d& pred_joints2d,
                     const SparseKeypointSet& ann);

struct AnchoredKeypoint {
  DenseKeypoint kp;
  DenseAnchor anchor;
};

std::vector<AnchoredKeypoint> resolve_anchors(
    const UVAtlas& atlas, const std::vector<DenseKeypoint>& dense);

struct LossDenseResult {
  double value = 0;
  Eigen::MatrixX3d dvertices;  // V x 3
  Eigen::Vector3d dcam{0, 0, 0};
};

// L1 between annotated dense keypoints and the barycentric blend of their
// anchor vertices' projections. Anchors are constants of the annotation.
LossDenseResult loss_dense(const MeshInstance& mesh, const CameraParams& cam,
                           const ImageFrame& frame, const UVAtlas& atlas,
                           const std::vector<DenseKeypoint>& dense);

LossDenseResult loss_dense_anchored(const MeshInstance& mesh,
                                    const CameraParams& cam,
                                    const ImageFrame& frame,
                                    const std::vector<AnchoredKeypoint>& anchored);

// --- combined objective ----------------------------------------------------

LossBreakdown total_loss_and_grad(const BodyModel& model, const UVAtlas& atlas,
                                  const FullParams& params,
                                  const AnnotationBundle& ann,
                                  const LossWeights& weights);

// Variant with pre-resolved dense anchors, for the inner fit loop.
LossBreakdown total_loss_with_anchors(const BodyModel& model,
                                      const FullParams& params,
                                      const AnnotationBundle& ann,
                                      const std::vector<AnchoredKeypoint>& anchored,
                                      const LossWeights& weights);

// PVE / MPJPE (root-translation aligned), PVE-T (zero pose, shape only) and
// DKD (mean pixel L1 over a fixed dense sample rendered from gt).
MetricReport evaluate_metrics(const BodyModel& model, const FullParams& pred,
                              const FullParams& gt, const UVAtlas& atlas,
                              const ImageFrame& frame,
                              const MetricOptions& opts = {});

// --- gradient checking -----------------------------------------------------

using LossEvaluator =
    std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)>;

struct GradCheckReport {
  double max_rel_error = 0;
  int worst_coord = -1;
  std::vector<int> kinks;  // coordinates flagged by one-sided slope sign change
};

// Central finite differences per coordinate with step eps*max(1,|param|).
// Kinked coordinates are flagged and excluded from the max.
GradCheckReport check_gradient(const LossEvaluator& f,
                               const Eigen::VectorXd& params, double eps);

}  // namespace bodyfit
