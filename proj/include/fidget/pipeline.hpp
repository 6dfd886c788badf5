#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "fidget/ensemble.hpp"
#include "fidget/features.hpp"
#include "fidget/skeleton.hpp"
#include "fidget/viz.hpp"

namespace fidget {

struct SynthParams {
  int n_normal = 8;
  int n_abnormal = 4;
  int frames = 1000;
  double noise = 1e-7;
};

struct PipelineConfig {
  std::string topology_path;  // empty: built-in default topology
  std::map<std::string, std::string> joint_remap;
  HistogramConfig histogram;
  SegmentationScheme segmentation;
  EnsembleConfig segment_ensemble;  // seed is derived from the master seed
  EnsembleConfig fusion_ensemble;
  SynthParams synth;
  OverlaySpec overlay;
  CapsuleRadii radii;

  std::string workspace = ".";
  std::string data_dir;      // default <workspace>/data
  std::string features_dir;  // default <workspace>/features
  std::string models_dir;    // default <workspace>/models
  std::string eval_dir;      // default <workspace>/eval
  std::string predict_dir;   // default <workspace>/predict
  std::string overlays_dir;  // default <workspace>/overlays

  std::uint64_t seed = 42;
  int jobs = 1;

  // Parses the config JSON, rejects unknown keys, fills directory defaults
  // and absolutizes all paths.
  static PipelineConfig load(const std::string& path);
  static PipelineConfig from_json(const nlohmann::json& j,
                                  const std::string& base_dir);

  nlohmann::json to_json() const;  // fully resolved, excludes jobs
};

struct VisualizeArgs {
  std::string pose_path;
  std::string frames_dir;
  std::string masks_dir;  // empty: capsule fallback
  std::string segments_csv;
};

// Stage driver.  Every stage writes into a staging directory that replaces
// the final output directory only on success, and drops an exact copy of the
// resolved config next to its outputs.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  void set_seed(std::uint64_t seed) { cfg_.seed = seed; }
  void set_jobs(int jobs);
  // Redirects the next stage's output directory only.
  void set_out_dir(const std::string& dir) { out_override_ = dir; }

  const PipelineConfig& config() const { return cfg_; }

  nlohmann::json run_synth();
  nlohmann::json run_extract();
  nlohmann::json run_train();
  nlohmann::json run_eval();
  nlohmann::json run_predict(const std::string& keypoints_path);
  nlohmann::json run_visualize(const VisualizeArgs& args);

 private:
  std::string take_out_dir(const std::string& configured);
  std::shared_ptr<const SkeletonTopology> topology() const;
  std::string fingerprint() const;

  PipelineConfig cfg_;
  std::string out_override_;
};

}  // namespace fidget
