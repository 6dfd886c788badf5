#pragma once

#include <map>
#include <string>
#include <vector>

#include "fidget/classify.hpp"
#include "fidget/features.hpp"
#include "fidget/fusion.hpp"
#include "fidget/skeleton.hpp"

namespace fidget {

// Shortest round-trip formatting; used for every double written to CSV.
std::string format_double(double v);

// Keypoint JSON: {"subject", "fps", "joints": [names], "frames": [[[x,y],..],..]}.
// Joint names must map onto the topology, either exactly or through remap
// (file name -> topology name).  Frames are reordered to topology order.
PoseSequence load_keypoints(const std::string& path,
                            std::shared_ptr<const SkeletonTopology> topology,
                            const std::map<std::string, std::string>& remap = {});
void save_keypoints(const PoseSequence& seq, const std::string& path);

// CSV with header subject_id,label; labels are "FM+" / "FM-".
std::vector<VideoAnnotation> load_annotations(const std::string& path);
void save_annotations(const std::vector<VideoAnnotation>& annotations,
                      const std::string& path);

// One CSV per part under dir, named features_<part>.csv with header
// subject_id,part,segment_index,label,v0..v{D-1}; D is fixed per part.
void save_features_dir(const std::vector<FusedFeature>& features,
                       const std::string& dir);
std::vector<FusedFeature> load_features_dir(const std::string& dir);

// CSV subject_id,part,segment_index,predicted,votes_fm_minus.
void save_segment_predictions(const std::vector<SegmentPrediction>& preds,
                              const std::string& path);
std::vector<SegmentPrediction> load_segment_predictions(
    const std::string& path);

// CSV subject_id,left_arm,right_arm,left_leg,right_leg,head_torso,label.
void save_score_vectors(const std::vector<ScoreVector>& vectors,
                        const std::string& path);

// CSV subject_id,verdict,vote_fraction.
struct Verdict {
  std::string subject_id;
  FMLabel label = FMLabel::FMPlus;
  double vote_fraction = 0.0;
};
void save_verdicts(const std::vector<Verdict>& verdicts,
                   const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fidget
