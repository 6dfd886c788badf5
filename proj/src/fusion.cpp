#include "fidget/fusion.hpp"

#include <map>
#include <utility>

#include "fidget/version.hpp"

namespace fidget {

std::vector<BodyPartScore> part_scores(
    const std::vector<SegmentPrediction>& preds) {
  if (preds.empty()) fail(ErrorCode::EmptyInput, "no segment predictions");

  // Integer counts keep the mean invariant under any prediction order.
  std::map<std::string, std::array<std::pair<long, long>, kPartCount>> acc;
  for (const auto& p : preds) {
    auto& [minus, total] = acc[p.subject_id][static_cast<int>(p.part)];
    minus += label_code(p.predicted);
    total += 1;
  }

  std::vector<BodyPartScore> out;
  out.reserve(acc.size() * kPartCount);
  for (const auto& [subject, per_part] : acc) {
    for (BodyPart part : kAllParts) {
      const auto& [minus, total] = per_part[static_cast<int>(part)];
      if (total == 0) {
        fail(ErrorCode::MissingPart,
             "subject " + subject + " has no predictions for " +
                 part_name(part));
      }
      BodyPartScore score;
      score.subject_id = subject;
      score.part = part;
      score.n_segments = static_cast<int>(total);
      score.s = static_cast<double>(minus) / static_cast<double>(total);
      out.push_back(std::move(score));
    }
  }
  return out;
}

std::vector<ScoreVector> make_score_vectors(
    const std::vector<BodyPartScore>& scores,
    const std::map<std::string, FMLabel>& annotations) {
  std::map<std::string, ScoreVector> by_subject;
  for (const auto& score : scores) {
    auto& v = by_subject[score.subject_id];
    v.subject_id = score.subject_id;
    v.scores[static_cast<int>(score.part)] = score.s;
  }
  std::vector<ScoreVector> out;
  out.reserve(by_subject.size());
  for (auto& [subject, v] : by_subject) {
    auto it = annotations.find(subject);
    if (it == annotations.end()) {
      fail(ErrorCode::Schema, "no annotation for subject " + subject);
    }
    v.label = it->second;
    out.push_back(std::move(v));
  }
  return out;
}

FusionModel::FusionModel(EnsembleConfig cfg, std::string fingerprint,
                         Ensemble ensemble)
    : cfg_(cfg),
      fingerprint_(std::move(fingerprint)),
      ensemble_(std::move(ensemble)) {}

nlohmann::json FusionModel::to_json() const {
  return {{"version", kModelFormatVersion},
          {"config", cfg_.to_json()},
          {"topology_fingerprint", fingerprint_},
          {"dim", ensemble_.dim()},
          {"trees", ensemble_.trees_json()}};
}

FusionModel FusionModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) {
      fail(ErrorCode::Schema, "unsupported fusion model version");
    }
    EnsembleConfig cfg = EnsembleConfig::from_json(j.at("config"));
    std::string fingerprint = j.at("topology_fingerprint").get<std::string>();
    Ensemble ensemble =
        Ensemble::from_trees_json(j.at("trees"), j.at("dim").get<int>());
    return FusionModel(cfg, std::move(fingerprint), std::move(ensemble));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("bad fusion model file: ") + e.what());
  }
}

FusionModel train_late_fusion(const std::vector<ScoreVector>& vectors,
                              const EnsembleConfig& cfg,
                              const std::string& fingerprint) {
  cfg.validate();
  if (vectors.empty()) fail(ErrorCode::EmptyDataset, "no score vectors");
  std::vector<const double*> rows;
  std::vector<int> labels;
  rows.reserve(vectors.size());
  labels.reserve(vectors.size());
  for (const auto& v : vectors) {
    rows.push_back(v.scores.data());
    labels.push_back(label_code(v.label));
  }
  Ensemble ensemble = Ensemble::train(rows, labels, kPartCount, cfg, 0);
  return FusionModel(cfg, fingerprint, std::move(ensemble));
}

VideoPrediction predict_video(const FusionModel& model,
                              const std::array<double, kPartCount>& scores) {
  VideoPrediction p;
  p.votes_fm_minus = model.ensemble().votes_one(scores.data(), kPartCount);
  p.label = p.votes_fm_minus >= 0.5 ? FMLabel::FMMinus : FMLabel::FMPlus;
  return p;
}

}  // namespace fidget
