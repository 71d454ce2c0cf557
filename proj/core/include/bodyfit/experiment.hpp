#pragma once

#include "bodyfit/body_model.hpp"
#include "bodyfit/fitter.hpp"
#include "bodyfit/objectives.hpp"
#include "bodyfit/uv_atlas.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bodyfit {

struct SyntheticScene {
  FullParams gt_params;
  AnnotationBundle annotations;  // 2D from projected joints, dense from the
                                 // rasterized gt, 3D joints and params copied
  std::uint64_t seed = 0;
  ImageFrame frame;
};

// Which annotation sources a fit may see. fraction_3d gates the 3D sources
// per scene (the partial-3D supervision rows).
struct SupervisionMix {
  std::string name;
  bool gt_params = false;
  bool joints3d = false;
  bool sparse2d = false;
  bool dense = false;
  double fraction_3d = 1.0;
  bool use_pose = true;
  bool use_shape = true;
  std::optional<LossWeights> weights_override;
};

enum class SweepAxis { none, noise, density };

struct ExperimentConfig {
  std::string model_file;  // empty: build the mini model from `seed`
  int scene_count = 20;
  std::uint64_t seed = 1;
  std::vector<SupervisionMix> mixes;
  SweepAxis axis = SweepAxis::none;
  std::vector<double> sweep_values;  // sigmas or keep fractions
  FitConfig fit;
  std::string out_dir = "out";
  int threads = 0;  // 0: hardware concurrency
};

struct SceneOutcome {
  bool ok = false;
  MetricReport metrics;
  std::string error;
};

struct ResultRow {
  std::string mix;
  double sweep_value = 0;
  bool has_sweep_value = false;
  std::vector<SceneOutcome> scenes;
  MetricReport mean;
  MetricReport stddev;
  int failures = 0;
};

// Deterministic scene synthesis: bounded random pose/shape/camera, projected
// joint keypoints, rasterized IUV, 100-150 sampled dense keypoints.
SyntheticScene generate_scene(const BodyModel& model, const UVAtlas& atlas,
                              std::uint64_t seed);

// Paired ablation driver: every (mix, sweep value) sees byte-identical
// scenes; failed fits are excluded from the means and counted.
std::vector<ResultRow> run_suite(const ExperimentConfig& config);
std::vector<ResultRow> run_suite(const ExperimentConfig& config,
                                 const BodyModel& model, const UVAtlas& atlas);

// results.csv, results.json and one PVE line chart per sweep axis.
void emit_report(const std::vector<ResultRow>& rows, SweepAxis axis,
                 const std::string& out_dir);

// The Appendix-C convention: (10, 1, 10) when all three loss families are
// supervised, 10 each when only two are.
LossWeights default_weights_for(bool has_3d, bool has_2d, bool has_dense);

// Built-in mix lists for the CLI subcommands.
std::vector<SupervisionMix> default_ablation_mixes();
std::vector<SupervisionMix> default_sweep_mixes();

// --- serialization ----------------------------------------------------------

FitConfig fit_config_from_json_file(const std::string& path);
ExperimentConfig experiment_config_from_json_file(const std::string& path);

void save_scene(const std::string& json_path, const SyntheticScene& scene);
// Reads an annotation bundle plus optional gt params written by save_scene.
SyntheticScene load_scene(const std::string& json_path);

void save_fit_result(const std::string& path, const BodyModel& model,
                     const FitResult& result,
                     const std::optional<MetricReport>& metrics);

std::vector<ResultRow> load_result_rows(const std::string& json_path,
                                        SweepAxis& axis);

const char* axis_name(SweepAxis axis);

}  // namespace bodyfit
