#pragma once

#include "bodyfit/body_model.hpp"
#include "bodyfit/iuv_map.hpp"

namespace bodyfit {

// Projects every face and fills covered pixels by depth test (smallest
// camera-space z wins) with the face's part id and the barycentrically
// interpolated template UV. Uncovered pixels stay background.
IUVMap rasterize_iuv(const BodyModel& model, const MeshInstance& mesh,
                     const CameraParams& cam, const ImageFrame& frame);

}  // namespace bodyfit
