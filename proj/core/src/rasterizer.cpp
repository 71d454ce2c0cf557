#include "bodyfit/rasterizer.hpp"

#include "bodyfit/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bodyfit {

IUVMap rasterize_iuv(const BodyModel& model, const MeshInstance& mesh,
                     const CameraParams& cam, const ImageFrame& frame) {
  IUVMap map(frame.width, frame.height);
  std::vector<double> zbuf(static_cast<std::size_t>(frame.width) * frame.height,
                           std::numeric_limits<double>::infinity());

  const Eigen::MatrixX2d pix = project(mesh.vertices, cam, frame);

  for (int f = 0; f < model.face_count(); ++f) {
    const int v0 = model.faces(f, 0), v1 = model.faces(f, 1),
              v2 = model.faces(f, 2);
    const Eigen::Vector2d a = pix.row(v0), b = pix.row(v1), c = pix.row(v2);

    const double det =
        (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (std::abs(det) < 1e-12) continue;  // edge-on

    const int xmin = std::max(0, static_cast<int>(std::ceil(std::min({a.x(), b.x(), c.x()}))));
    const int xmax = std::min(frame.width - 1,
                              static_cast<int>(std::floor(std::max({a.x(), b.x(), c.x()}))));
    const int ymin = std::max(0, static_cast<int>(std::ceil(std::min({a.y(), b.y(), c.y()}))));
    const int ymax = std::min(frame.height - 1,
                              static_cast<int>(std::floor(std::max({a.y(), b.y(), c.y()}))));

    const int part = model.face_part(f);
    const Eigen::Vector3d zs(mesh.vertices(v0, 2), mesh.vertices(v1, 2),
                             mesh.vertices(v2, 2));
    const Eigen::Vector3d us(model.vertex_iuv(v0, 1), model.vertex_iuv(v1, 1),
                             model.vertex_iuv(v2, 1));
    const Eigen::Vector3d vs(model.vertex_iuv(v0, 2), model.vertex_iuv(v1, 2),
                             model.vertex_iuv(v2, 2));

    for (int y = ymin; y <= ymax; ++y) {
      for (int x = xmin; x <= xmax; ++x) {
        const Eigen::Vector2d p(x, y);
        const double w0 = ((b.x() - p.x()) * (c.y() - p.y()) -
                           (b.y() - p.y()) * (c.x() - p.x())) / det;
        const double w1 = ((c.x() - p.x()) * (a.y() - p.y()) -
                           (c.y() - p.y()) * (a.x() - p.x())) / det;
        const double w2 = 1.0 - w0 - w1;
        if (w0 < -1e-9 || w1 < -1e-9 || w2 < -1e-9) continue;

        const Eigen::Vector3d w(w0, w1, w2);
        const double z = w.dot(zs);
        const std::size_t i = static_cast<std::size_t>(y) * frame.width + x;
        if (z >= zbuf[i]) continue;
        zbuf[i] = z;
        const auto quant = [](double q) {
          return static_cast<std::uint8_t>(
              std::clamp(std::lround(q), 0L, 255L));
        };
        map.set(x, y, static_cast<std::uint8_t>(part), quant(w.dot(us)),
                quant(w.dot(vs)));
      }
    }
  }
  return map;
}

}  // namespace bodyfit
