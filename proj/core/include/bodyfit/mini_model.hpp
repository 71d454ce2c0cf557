#pragma once

#include "bodyfit/body_model.hpp"
#include "bodyfit/iuv_map.hpp"

#include <cstdint>

namespace bodyfit {

// Deterministic desk-scale humanoid: 12 tube segments (one body part each),
// V=512, K_total=12, B=4, P=12. Part-coherent faces force the segments to be
// topologically separate; they abut geometrically to form the figure.
BodyModel make_mini_model(std::uint64_t seed);

// Keypoint id k maps to the parts of joint k's own segment, its parent's and
// its children's. This is the default consistency table shipped for the
// mini-model layout.
KeypointPartTable mini_part_table(const BodyModel& model);

}  // namespace bodyfit
