#include "fidget/classify.hpp"

#include <algorithm>

#include "fidget/version.hpp"

namespace fidget {

Dataset Dataset::from_features(std::vector<FusedFeature> features) {
  Dataset ds;
  for (const auto& f : features) {
    auto [it, inserted] = ds.annotations.emplace(f.subject_id, f.label);
    if (!inserted && it->second != f.label) {
      fail(ErrorCode::Schema,
           "subject " + f.subject_id + " carries conflicting labels");
    }
  }
  ds.features = std::move(features);
  return ds;
}

std::vector<std::string> Dataset::subjects() const {
  std::vector<std::string> out;
  out.reserve(annotations.size());
  for (const auto& [id, _] : annotations) out.push_back(id);
  return out;
}

Dataset Dataset::without_subject(const std::string& subject_id) const {
  Dataset ds;
  for (const auto& f : features) {
    if (f.subject_id != subject_id) ds.features.push_back(f);
  }
  for (const auto& [id, label] : annotations) {
    if (id != subject_id) ds.annotations.emplace(id, label);
  }
  return ds;
}

Dataset Dataset::only_subject(const std::string& subject_id) const {
  Dataset ds;
  for (const auto& f : features) {
    if (f.subject_id == subject_id) ds.features.push_back(f);
  }
  auto it = annotations.find(subject_id);
  if (it != annotations.end()) ds.annotations.emplace(*it);
  return ds;
}

SegmentModel::SegmentModel(EnsembleConfig cfg, std::string fingerprint,
                           std::array<Ensemble, kPartCount> per_part)
    : cfg_(cfg),
      fingerprint_(std::move(fingerprint)),
      per_part_(std::move(per_part)) {}

int SegmentModel::part_dim(BodyPart part) const {
  return per_part_[static_cast<int>(part)].dim();
}

SegmentPrediction SegmentModel::predict(const FusedFeature& feature) const {
  const auto& ensemble = per_part_[static_cast<int>(feature.part)];
  if (static_cast<int>(feature.vector.size()) != ensemble.dim()) {
    fail(ErrorCode::DimensionMismatch,
         std::string(part_name(feature.part)) + " feature has dimension " +
             std::to_string(feature.vector.size()) + ", model expects " +
             std::to_string(ensemble.dim()));
  }
  SegmentPrediction p;
  p.subject_id = feature.subject_id;
  p.part = feature.part;
  p.segment_index = feature.segment_index;
  p.votes_fm_minus = ensemble.votes_one(feature.vector.data(),
                                        static_cast<int>(feature.vector.size()));
  p.predicted = p.votes_fm_minus >= 0.5 ? FMLabel::FMMinus : FMLabel::FMPlus;
  return p;
}

nlohmann::json SegmentModel::to_json() const {
  nlohmann::json parts;
  for (BodyPart p : kAllParts) {
    const auto& e = per_part_[static_cast<int>(p)];
    parts[part_name(p)] = {{"dim", e.dim()}, {"trees", e.trees_json()}};
  }
  return {{"version", kModelFormatVersion},
          {"config", cfg_.to_json()},
          {"topology_fingerprint", fingerprint_},
          {"parts", parts}};
}

SegmentModel SegmentModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) {
      fail(ErrorCode::Schema, "unsupported segment model version");
    }
    EnsembleConfig cfg = EnsembleConfig::from_json(j.at("config"));
    std::string fingerprint = j.at("topology_fingerprint").get<std::string>();
    std::array<Ensemble, kPartCount> per_part;
    for (BodyPart p : kAllParts) {
      const auto& pj = j.at("parts").at(part_name(p));
      per_part[static_cast<int>(p)] =
          Ensemble::from_trees_json(pj.at("trees"), pj.at("dim").get<int>());
    }
    return SegmentModel(cfg, std::move(fingerprint), std::move(per_part));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("bad segment model file: ") + e.what());
  }
}

SegmentModel train_segment_classifier(const Dataset& train,
                                      const EnsembleConfig& cfg,
                                      const std::string& fingerprint) {
  cfg.validate();
  if (train.features.empty()) {
    fail(ErrorCode::EmptyDataset, "no training features");
  }

  std::array<Ensemble, kPartCount> per_part;
  for (BodyPart part : kAllParts) {
    const int pi = static_cast<int>(part);
    std::vector<const double*> rows;
    std::vector<int> labels;
    int dim = -1;
    for (const auto& f : train.features) {
      if (f.part != part) continue;
      if (dim < 0) {
        dim = static_cast<int>(f.vector.size());
      } else if (dim != static_cast<int>(f.vector.size())) {
        fail(ErrorCode::DimensionMismatch,
             std::string(part_name(part)) +
                 " features have inconsistent dimensions");
      }
      rows.push_back(f.vector.data());
      labels.push_back(label_code(f.label));
    }
    if (rows.empty()) {
      fail(ErrorCode::EmptyDataset,
           "no training features for " + std::string(part_name(part)));
    }
    // Each part keeps its own tree stream: (seed, part, tree).
    per_part[pi] = Ensemble::train(rows, labels, dim, cfg,
                                   static_cast<std::uint64_t>(pi));
  }
  return SegmentModel(cfg, fingerprint, std::move(per_part));
}

std::vector<LosoFold> loso_folds(const Dataset& ds) {
  const auto subjects = ds.subjects();
  if (subjects.size() < 2) {
    fail(ErrorCode::TooFewSubjects,
         "leave-one-subject-out needs at least 2 subjects, got " +
             std::to_string(subjects.size()));
  }
  std::vector<LosoFold> folds;
  folds.reserve(subjects.size());
  for (const auto& test : subjects) {
    LosoFold fold;
    fold.test_subject = test;
    for (const auto& s : subjects) {
      if (s != test) fold.train_subjects.push_back(s);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

Metrics compute_metrics(
    const std::vector<std::pair<FMLabel, FMLabel>>& predicted_true) {
  if (predicted_true.empty()) {
    fail(ErrorCode::EmptyInput, "no predictions to score");
  }
  Metrics m;
  for (const auto& [pred, truth] : predicted_true) {
    const bool pred_abnormal = pred == FMLabel::FMMinus;
    const bool true_abnormal = truth == FMLabel::FMMinus;
    if (true_abnormal) {
      (pred_abnormal ? m.tp : m.fn) += 1;
    } else {
      (pred_abnormal ? m.fp : m.tn) += 1;
    }
  }
  const long total = m.tp + m.tn + m.fp + m.fn;
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
  if (m.tp + m.fn > 0) {
    m.sensitivity =
        static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  }
  if (m.tn + m.fp > 0) {
    m.specificity =
        static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
  }
  return m;
}

}  // namespace fidget
