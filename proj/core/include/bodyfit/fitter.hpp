#pragma once

#include "bodyfit/body_model.hpp"
#include "bodyfit/objectives.hpp"
#include "bodyfit/uv_atlas.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bodyfit {

struct FitConfig {
  int max_iters = 2000;
  double step_size = 2e-2;
  double beta1 = 0.9;   // first-moment decay
  double beta2 = 0.999; // second-moment decay
  double epsilon = 1e-8;
  double tolerance = 1e-6;  // relative best-loss decrease over the window
  int window = 10;
  // Step size decays geometrically to step_size*final_step_fraction at
  // max_iters; 1.0 disables the schedule.
  double final_step_fraction = 0.01;
  // Optional staged schedule: camera + global rotation only for the first
  // 10% of iterations.
  bool stage_camera_first = false;
  LossWeights weights;
  std::uint64_t seed = 0;  // reserved; the solver itself is deterministic
};

struct FitResult {
  FullParams params;               // best-so-far
  std::vector<double> loss_trace;  // total at init plus after every step
  int iterations_used = 0;
  bool converged = false;
  LossBreakdown breakdown;         // evaluated at the returned params
};

// T-pose, zero shape, f=1 camera: the initialization used in place of a
// dataset mean.
FullParams init_mean_params(const BodyModel& model);

// Bias-corrected moment-accumulating descent on the total loss. Deterministic
// given inputs. Throws on non-finite loss or gradient, naming the offending
// term and iteration.
FitResult fit(const BodyModel& model, const UVAtlas& atlas,
              const AnnotationBundle& ann, const FitConfig& cfg,
              const std::optional<FullParams>& init = std::nullopt);

}  // namespace bodyfit
