#include "bodyfit/mini_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace bodyfit {

namespace {

struct SegmentSpec {
  int parent;              // joint index, -1 for root
  Eigen::Vector3d attach;  // nominal joint position (before jitter)
  Eigen::Vector3d dir;     // bone direction, unit
  double length;
  double radius;
  int rings;
};

constexpr int kSlots = 8;

}  // namespace

BodyModel make_mini_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Torso chain up from the pelvis, arms off the chest, legs off the root.
  const double sy = 0.12, cy = 0.32, hy = 0.42;  // spine/chest/head bases
  std::vector<SegmentSpec> segs = {
      {-1, {0, 0, 0}, {0, 1, 0}, 0.12, 0.090, 5},        // 0 pelvis
      {0, {0, sy, 0}, {0, 1, 0}, 0.20, 0.080, 6},        // 1 spine
      {1, {0, cy, 0}, {0, 1, 0}, 0.10, 0.075, 5},        // 2 chest
      {2, {0, hy, 0}, {0, 1, 0}, 0.16, 0.070, 6},        // 3 head
      {2, {0.07, 0.40, 0}, {1, 0, 0}, 0.22, 0.035, 5},   // 4 l upper arm
      {4, {0.29, 0.40, 0}, {1, 0, 0}, 0.20, 0.030, 5},   // 5 l forearm
      {2, {-0.07, 0.40, 0}, {-1, 0, 0}, 0.22, 0.035, 5}, // 6 r upper arm
      {6, {-0.29, 0.40, 0}, {-1, 0, 0}, 0.20, 0.030, 5}, // 7 r forearm
      {0, {0.08, 0, 0}, {0, -1, 0}, 0.30, 0.055, 6},     // 8 l thigh
      {8, {0.08, -0.30, 0}, {0, -1, 0}, 0.28, 0.040, 5}, // 9 l shin
      {0, {-0.08, 0, 0}, {0, -1, 0}, 0.30, 0.055, 6},    // 10 r thigh
      {10, {-0.08, -0.30, 0}, {0, -1, 0}, 0.28, 0.040, 5}};  // 11 r shin

  const int K = static_cast<int>(segs.size());

  // Seeded proportions; positions are re-chained from the jittered lengths so
  // children stay attached to their parent's endpoint.
  std::vector<double> length(K), radius(K);
  for (int k = 0; k < K; ++k) {
    length[k] = segs[k].length * (1.0 + 0.04 * unit(rng));
    radius[k] = segs[k].radius * (1.0 + 0.05 * unit(rng));
  }
  std::vector<Eigen::Vector3d> joint(K);
  for (int k = 0; k < K; ++k) {
    const int p = segs[k].parent;
    if (p < 0) {
      joint[k] = segs[k].attach;
    } else {
      const Eigen::Vector3d lateral = segs[k].attach - segs[p].attach -
                                      segs[p].dir * segs[p].length;
      joint[k] = joint[p] + segs[p].dir * length[p] + lateral;
    }
  }

  BodyModel m;
  m.joint_count = K;
  m.shape_dim = 4;
  m.part_count = K;
  m.parents.resize(K);
  for (int k = 0; k < K; ++k) m.parents[k] = segs[k].parent;

  int V = 0;
  for (const auto& s : segs) V += s.rings * kSlots;
  m.vertex_count = V;
  m.template_vertices.resize(V, 3);
  m.vertex_iuv.resize(V, 3);
  m.skin_weights = Eigen::MatrixXd::Zero(V, K);
  m.joint_regressor = Eigen::MatrixXd::Zero(K, V);
  m.shape_dirs.assign(m.shape_dim, Eigen::MatrixX3d::Zero(V, 3));

  std::vector<std::array<int, 3>> faces;

  int base = 0;
  for (int k = 0; k < K; ++k) {
    const int rings = segs[k].rings;
    const Eigen::Vector3d d = segs[k].dir;
    // Cross-section frame with the open seam facing +z (away from camera).
    Eigen::Vector3d w = Eigen::Vector3d::UnitZ() - d.z() * d;
    w.normalize();
    const Eigen::Vector3d u = d.cross(w);

    const Eigen::Vector3d seg_mid = joint[k] + d * (0.5 * length[k]);

    for (int r = 0; r < rings; ++r) {
      const double t = static_cast<double>(r) / (rings - 1);
      const Eigen::Vector3d center = joint[k] + d * (t * length[k]);
      for (int s = 0; s < kSlots; ++s) {
        const double ang = std::numbers::pi / 2 + std::numbers::pi / kSlots +
                           2.0 * std::numbers::pi * s / kSlots;
        const Eigen::Vector3d radial = std::cos(ang) * u + std::sin(ang) * w;
        const int vi = base + r * kSlots + s;
        const Eigen::Vector3d pos = center + radius[k] * radial;
        m.template_vertices.row(vi) = pos;
        m.vertex_iuv(vi, 0) = k + 1;
        m.vertex_iuv(vi, 1) = 255.0 * s / (kSlots - 1);
        m.vertex_iuv(vi, 2) = 255.0 * r / (rings - 1);

        if (k == 0 || r >= 2) {
          m.skin_weights(vi, k) = 1.0;
        } else if (r == 0) {
          m.skin_weights(vi, k) = 0.65;
          m.skin_weights(vi, segs[k].parent) = 0.35;
        } else {
          m.skin_weights(vi, k) = 0.9;
          m.skin_weights(vi, segs[k].parent) = 0.1;
        }
        if (r == 0) m.joint_regressor(k, vi) = 1.0 / kSlots;

        // Shape basis: stature, girth, width, torso bulk.
        m.shape_dirs[0].row(vi) = Eigen::RowVector3d(0, 0.08 * pos.y(), 0);
        m.shape_dirs[1].row(vi) = 0.012 * radial;  // keeps thin limbs positive at beta=-2
        m.shape_dirs[2].row(vi) =
            Eigen::RowVector3d(0.06 * pos.x(), 0, 0.03 * pos.z());
        if (k <= 2) {
          m.shape_dirs[3].row(vi) = 0.04 * (pos - seg_mid);
        }
      }
    }

    for (int r = 0; r + 1 < rings; ++r) {
      for (int s = 0; s + 1 < kSlots; ++s) {
        const int a = base + r * kSlots + s;
        const int b = a + 1;
        const int c = a + kSlots;
        const int e = c + 1;
        faces.push_back({a, b, c});
        faces.push_back({b, e, c});
      }
    }
    base += rings * kSlots;
  }

  m.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int c = 0; c < 3; ++c) m.faces(static_cast<Eigen::Index>(f), c) = faces[f][c];
  }

  validate_model(m);
  return m;
}

KeypointPartTable mini_part_table(const BodyModel& model) {
  KeypointPartTable table;
  const int K = model.joint_count;
  for (int k = 0; k < K; ++k) {
    std::vector<int>& parts = table.allowed[k];
    parts.push_back(k + 1);
    if (model.parents[k] >= 0) parts.push_back(model.parents[k] + 1);
    for (int c = 0; c < K; ++c) {
      if (model.parents[c] == k) parts.push_back(c + 1);
    }
  }
  return table;
}

}  // namespace bodyfit
