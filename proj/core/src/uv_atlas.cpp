#include "bodyfit/uv_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bodyfit {

namespace {

constexpr double kContainEps = 1e-9;

int grid_cell(double coord) {
  int c = static_cast<int>(coord * UVAtlas::kGridCells / 256.0);
  return std::clamp(c, 0, UVAtlas::kGridCells - 1);
}

// Barycentric coordinates of p in (a,b,c); returns false when degenerate.
bool barycentric(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                 const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                 Eigen::Vector3d& out) {
  const Eigen::Vector2d e0 = a - c, e1 = b - c, ep = p - c;
  const double det = e0.x() * e1.y() - e0.y() * e1.x();
  if (std::abs(det) < 1e-15) return false;
  out[0] = (ep.x() * e1.y() - ep.y() * e1.x()) / det;
  out[1] = (e0.x() * ep.y() - e0.y() * ep.x()) / det;
  out[2] = 1.0 - out[0] - out[1];
  return true;
}

Eigen::Vector3d clamp_weights(Eigen::Vector3d w) {
  w = w.cwiseMax(0.0);
  const double s = w.sum();
  if (s > 0) w /= s;
  return w;
}

// Closest point on segment [a,b], returned as interpolation parameter t.
double segment_t(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                 const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-30) return 0.0;
  return std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
}

}  // namespace

UVAtlas build_atlas(const BodyModel& model) {
  UVAtlas atlas;
  atlas.part_count = model.part_count;
  atlas.faces = model.faces;
  const int F = model.face_count();
  atlas.face_part.resize(F);
  atlas.face_uv.resize(F);
  atlas.parts.resize(model.part_count + 1);

  for (int f = 0; f < F; ++f) {
    const int part = model.face_part(f);
    atlas.face_part[f] = part;
    for (int c = 0; c < 3; ++c) {
      const int v = model.faces(f, c);
      atlas.face_uv[f][c] = {model.vertex_iuv(v, 1), model.vertex_iuv(v, 2)};
    }
    const auto& uv = atlas.face_uv[f];
    const double area2 = std::abs((uv[1] - uv[0]).x() * (uv[2] - uv[0]).y() -
                                  (uv[1] - uv[0]).y() * (uv[2] - uv[0]).x());
    if (area2 * 0.5 <= 1e-9) {
      throw std::runtime_error("face " + std::to_string(f) +
                               " has a degenerate UV triangle");
    }

    auto& pi = atlas.parts[part];
    pi.faces.push_back(f);
    double umin = uv[0].x(), umax = uv[0].x(), vmin = uv[0].y(), vmax = uv[0].y();
    for (int c = 1; c < 3; ++c) {
      umin = std::min(umin, uv[c].x());
      umax = std::max(umax, uv[c].x());
      vmin = std::min(vmin, uv[c].y());
      vmax = std::max(vmax, uv[c].y());
    }
    for (int cu = grid_cell(umin); cu <= grid_cell(umax); ++cu) {
      for (int cv = grid_cell(vmin); cv <= grid_cell(vmax); ++cv) {
        pi.cells[cu * UVAtlas::kGridCells + cv].push_back(f);
      }
    }
  }
  return atlas;
}

DenseAnchor phi_lookup(const UVAtlas& atlas, int part, double u, double v) {
  if (part < 1 || part > atlas.part_count) {
    throw std::runtime_error("part id " + std::to_string(part) +
                             " out of range");
  }
  const auto& pi = atlas.parts[part];
  if (pi.faces.empty()) {
    throw std::runtime_error("part " + std::to_string(part) + " has no faces");
  }

  const Eigen::Vector2d p(u, v);
  const auto& cell =
      pi.cells[grid_cell(u) * UVAtlas::kGridCells + grid_cell(v)];

  for (int f : cell) {
    const auto& uv = atlas.face_uv[f];
    Eigen::Vector3d w;
    if (!barycentric(p, uv[0], uv[1], uv[2], w)) continue;
    if (w.minCoeff() >= -kContainEps) {
      DenseAnchor a;
      a.vertices = {atlas.faces(f, 0), atlas.faces(f, 1), atlas.faces(f, 2)};
      a.weights = clamp_weights(w);
      return a;
    }
  }

  // Outside every triangle of the part (noisy UV): clamp to the closest one.
  double best_d2 = std::numeric_limits<double>::infinity();
  int best_f = -1;
  Eigen::Vector3d best_w{0, 0, 0};
  for (int f : pi.faces) {
    const auto& uv = atlas.face_uv[f];
    Eigen::Vector3d w;
    if (barycentric(p, uv[0], uv[1], uv[2], w) && w.minCoeff() >= -kContainEps) {
      best_f = f;
      best_w = clamp_weights(w);
      break;  // inside after all (grid miss cannot happen, but stay safe)
    }
    // Closest boundary point over the three edges.
    for (int e = 0; e < 3; ++e) {
      const int i = e, j = (e + 1) % 3;
      const double t = segment_t(p, uv[i], uv[j]);
      const Eigen::Vector2d q = uv[i] + t * (uv[j] - uv[i]);
      const double d2 = (p - q).squaredNorm();
      if (d2 < best_d2 - 1e-15) {
        best_d2 = d2;
        best_f = f;
        best_w.setZero();
        best_w[i] = 1.0 - t;
        best_w[j] = t;
      }
    }
  }

  DenseAnchor a;
  a.vertices = {atlas.faces(best_f, 0), atlas.faces(best_f, 1),
                atlas.faces(best_f, 2)};
  a.weights = best_w;
  return a;
}

}  // namespace bodyfit
