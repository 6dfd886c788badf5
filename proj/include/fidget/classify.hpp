#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fidget/ensemble.hpp"
#include "fidget/features.hpp"

namespace fidget {

struct Dataset {
  std::vector<FusedFeature> features;
  std::map<std::string, FMLabel> annotations;  // subject -> video label

  // Derives annotations from the features' labels; throws Schema when a
  // subject carries conflicting labels.
  static Dataset from_features(std::vector<FusedFeature> features);

  std::vector<std::string> subjects() const;  // sorted, distinct
  Dataset without_subject(const std::string& subject_id) const;
  Dataset only_subject(const std::string& subject_id) const;
};

struct SegmentPrediction {
  std::string subject_id;
  BodyPart part = BodyPart::LeftArm;
  int segment_index = 0;
  FMLabel predicted = FMLabel::FMPlus;
  double votes_fm_minus = 0.0;  // predicted == FMMinus iff votes >= 0.5
};

// One bagged-tree ensemble per body part; feature vectors of different parts
// have different dimensions, so predictions route by part.
class SegmentModel {
 public:
  SegmentModel() = default;
  SegmentModel(EnsembleConfig cfg, std::string fingerprint,
               std::array<Ensemble, kPartCount> per_part);

  const EnsembleConfig& config() const { return cfg_; }
  const std::string& fingerprint() const { return fingerprint_; }
  int part_dim(BodyPart part) const;

  SegmentPrediction predict(const FusedFeature& feature) const;

  nlohmann::json to_json() const;
  static SegmentModel from_json(const nlohmann::json& j);

 private:
  EnsembleConfig cfg_;
  std::string fingerprint_;
  std::array<Ensemble, kPartCount> per_part_;
};

SegmentModel train_segment_classifier(const Dataset& train,
                                      const EnsembleConfig& cfg,
                                      const std::string& fingerprint);

inline SegmentPrediction predict_segment(const SegmentModel& model,
                                         const FusedFeature& feature) {
  return model.predict(feature);
}

struct LosoFold {
  std::vector<std::string> train_subjects;
  std::string test_subject;
};

// One fold per subject, ordered by subject_id.  Throws TooFewSubjects for
// fewer than 2 subjects.
std::vector<LosoFold> loso_folds(const Dataset& ds);

// Positive class is abnormal (FMMinus).  Ratios with a zero denominator stay
// absent rather than being reported as 0.
struct Metrics {
  long tp = 0;
  long fn = 0;
  long tn = 0;
  long fp = 0;
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

Metrics compute_metrics(
    const std::vector<std::pair<FMLabel, FMLabel>>& predicted_true);

}  // namespace fidget
