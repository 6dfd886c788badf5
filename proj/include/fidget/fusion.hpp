#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fidget/classify.hpp"

namespace fidget {

// Mean of 0/1-coded segment decisions for one body part of one subject.
struct BodyPartScore {
  std::string subject_id;
  BodyPart part = BodyPart::LeftArm;
  double s = 0.0;
  int n_segments = 0;
};

// Averages the decided labels (not the vote fractions).  Every subject
// present must have predictions for all 5 parts; throws MissingPart
// otherwise.  Output ordered by (subject_id, part).
std::vector<BodyPartScore> part_scores(
    const std::vector<SegmentPrediction>& preds);

struct ScoreVector {
  std::string subject_id;
  std::array<double, kPartCount> scores{};  // canonical part order
  FMLabel label = FMLabel::FMPlus;
};

std::vector<ScoreVector> make_score_vectors(
    const std::vector<BodyPartScore>& scores,
    const std::map<std::string, FMLabel>& annotations);

class FusionModel {
 public:
  FusionModel() = default;
  FusionModel(EnsembleConfig cfg, std::string fingerprint, Ensemble ensemble);

  const EnsembleConfig& config() const { return cfg_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const Ensemble& ensemble() const { return ensemble_; }

  nlohmann::json to_json() const;
  static FusionModel from_json(const nlohmann::json& j);

 private:
  EnsembleConfig cfg_;
  std::string fingerprint_;
  Ensemble ensemble_;
};

FusionModel train_late_fusion(const std::vector<ScoreVector>& vectors,
                              const EnsembleConfig& cfg,
                              const std::string& fingerprint);

struct VideoPrediction {
  FMLabel label = FMLabel::FMPlus;  // FMMinus maps to verdict "abnormal"
  double votes_fm_minus = 0.0;
};

VideoPrediction predict_video(const FusionModel& model,
                              const std::array<double, kPartCount>& scores);

}  // namespace fidget
