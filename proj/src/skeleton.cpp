#include "fidget/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fidget {

namespace {

constexpr const char* kPartNames[kPartCount] = {
    "LeftArm", "RightArm", "LeftLeg", "RightLeg", "HeadTorso"};
constexpr const char* kPartColumns[kPartCount] = {
    "left_arm", "right_arm", "left_leg", "right_leg", "head_torso"};

}  // namespace

const char* part_name(BodyPart part) {
  return kPartNames[static_cast<int>(part)];
}

const char* part_column(BodyPart part) {
  return kPartColumns[static_cast<int>(part)];
}

BodyPart parse_part(std::string_view name) {
  for (BodyPart p : kAllParts) {
    if (name == part_name(p) || name == part_column(p)) return p;
  }
  fail(ErrorCode::Schema, "unknown body part \"" + std::string(name) + "\"");
}

const char* label_name(FMLabel label) {
  return label == FMLabel::FMPlus ? "FM+" : "FM-";
}

const char* verdict_name(FMLabel label) {
  return label == FMLabel::FMPlus ? "normal" : "abnormal";
}

FMLabel parse_label(std::string_view name) {
  if (name == "FM+") return FMLabel::FMPlus;
  if (name == "FM-") return FMLabel::FMMinus;
  fail(ErrorCode::Schema, "unknown FM label \"" + std::string(name) + "\"");
}

int SkeletonTopology::joint_index(std::string_view name) const {
  for (int i = 0; i < joint_count(); ++i) {
    if (joints[i] == name) return i;
  }
  return -1;
}

BodyPart SkeletonTopology::part_of_joint(int joint) const {
  for (BodyPart p : kAllParts) {
    const auto& m = parts[static_cast<int>(p)].joints;
    if (std::find(m.begin(), m.end(), joint) != m.end()) return p;
  }
  fail(ErrorCode::Schema,
       "joint " + std::to_string(joint) + " belongs to no part");
}

BodyPart SkeletonTopology::part_of_bone(int bone) const {
  for (BodyPart p : kAllParts) {
    const auto& m = parts[static_cast<int>(p)].bones;
    if (std::find(m.begin(), m.end(), bone) != m.end()) return p;
  }
  fail(ErrorCode::Schema,
       "bone " + std::to_string(bone) + " belongs to no part");
}

void SkeletonTopology::validate() const {
  if (joints.empty()) fail(ErrorCode::Schema, "topology has no joints");
  std::set<std::string> names(joints.begin(), joints.end());
  if (static_cast<int>(names.size()) != joint_count()) {
    fail(ErrorCode::Schema, "duplicate joint names in topology");
  }
  for (int b = 0; b < bone_count(); ++b) {
    auto [p, d] = bones[b];
    if (p < 0 || p >= joint_count() || d < 0 || d >= joint_count()) {
      fail(ErrorCode::Schema,
           "bone " + std::to_string(b) + " references a missing joint");
    }
    if (p == d) {
      fail(ErrorCode::Schema, "bone " + std::to_string(b) + " is degenerate");
    }
  }

  std::vector<int> joint_owner(joints.size(), -1);
  std::vector<int> bone_owner(bones.size(), -1);
  for (int pi = 0; pi < kPartCount; ++pi) {
    for (int j : parts[pi].joints) {
      if (j < 0 || j >= joint_count()) {
        fail(ErrorCode::Schema, std::string(kPartNames[pi]) +
                                    " lists a missing joint index");
      }
      if (joint_owner[j] != -1) {
        fail(ErrorCode::Schema, "joint \"" + joints[j] + "\" is in two parts");
      }
      joint_owner[j] = pi;
    }
    for (int b : parts[pi].bones) {
      if (b < 0 || b >= bone_count()) {
        fail(ErrorCode::Schema,
             std::string(kPartNames[pi]) + " lists a missing bone index");
      }
      if (bone_owner[b] != -1) {
        fail(ErrorCode::Schema, "bone " + std::to_string(b) + " is in two parts");
      }
      bone_owner[b] = pi;
    }
  }
  for (int j = 0; j < joint_count(); ++j) {
    if (joint_owner[j] == -1) {
      fail(ErrorCode::Schema, "joint \"" + joints[j] + "\" belongs to no part");
    }
  }
  for (int b = 0; b < bone_count(); ++b) {
    if (bone_owner[b] == -1) {
      fail(ErrorCode::Schema, "bone " + std::to_string(b) + " belongs to no part");
    }
  }

  bool scale_found = false;
  for (const auto& bone : bones) {
    if ((bone.first == scale_bone.first && bone.second == scale_bone.second) ||
        (bone.first == scale_bone.second && bone.second == scale_bone.first)) {
      scale_found = true;
      break;
    }
  }
  if (!scale_found) {
    fail(ErrorCode::Schema, "scale_bone is not a member of bones");
  }
}

SkeletonTopology default_topology() {
  SkeletonTopology t;
  t.joints = {
      "head",     "neck",    "pelvis",                            // 0..2
      "shoulder_l", "elbow_l", "wrist_l",                         // 3..5
      "shoulder_r", "elbow_r", "wrist_r",                         // 6..8
      "hip_l",    "knee_l",  "ankle_l",                           // 9..11
      "hip_r",    "knee_r",  "ankle_r",                           // 12..14
  };
  t.bones = {
      {1, 0},    // 0: neck-head
      {1, 2},    // 1: neck-pelvis (scale bone)
      {3, 4},    // 2: shoulder_l-elbow_l
      {4, 5},    // 3: elbow_l-wrist_l
      {6, 7},    // 4: shoulder_r-elbow_r
      {7, 8},    // 5: elbow_r-wrist_r
      {2, 9},    // 6: pelvis-hip_l
      {9, 10},   // 7: hip_l-knee_l
      {10, 11},  // 8: knee_l-ankle_l
      {2, 12},   // 9: pelvis-hip_r
      {12, 13},  // 10: hip_r-knee_r
      {13, 14},  // 11: knee_r-ankle_r
  };
  t.parts[static_cast<int>(BodyPart::LeftArm)] = {{3, 4, 5}, {2, 3}};
  t.parts[static_cast<int>(BodyPart::RightArm)] = {{6, 7, 8}, {4, 5}};
  t.parts[static_cast<int>(BodyPart::LeftLeg)] = {{9, 10, 11}, {7, 8}};
  t.parts[static_cast<int>(BodyPart::RightLeg)] = {{12, 13, 14}, {10, 11}};
  t.parts[static_cast<int>(BodyPart::HeadTorso)] = {{0, 1, 2}, {0, 1, 6, 9}};
  t.scale_bone = {1, 2};
  t.validate();
  return t;
}

namespace {

nlohmann::json topology_to_json(const SkeletonTopology& t) {
  nlohmann::json j;
  j["joints"] = t.joints;
  auto bones = nlohmann::json::array();
  for (const auto& [p, d] : t.bones) bones.push_back({p, d});
  j["bones"] = bones;
  nlohmann::json parts;
  for (BodyPart p : kAllParts) {
    const auto& m = t.parts[static_cast<int>(p)];
    parts[part_name(p)] = {{"joints", m.joints}, {"bones", m.bones}};
  }
  j["parts"] = parts;
  j["scale_bone"] = {t.scale_bone.first, t.scale_bone.second};
  return j;
}

SkeletonTopology topology_from_json(const nlohmann::json& j) {
  SkeletonTopology t;
  try {
    t.joints = j.at("joints").get<std::vector<std::string>>();
    for (const auto& b : j.at("bones")) {
      t.bones.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
    }
    const auto& parts = j.at("parts");
    for (BodyPart p : kAllParts) {
      const auto& m = parts.at(part_name(p));
      t.parts[static_cast<int>(p)].joints =
          m.at("joints").get<std::vector<int>>();
      t.parts[static_cast<int>(p)].bones =
          m.at("bones").get<std::vector<int>>();
    }
    const auto& sb = j.at("scale_bone");
    t.scale_bone = {sb.at(0).get<int>(), sb.at(1).get<int>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("bad topology file: ") + e.what());
  }
  t.validate();
  return t;
}

}  // namespace

SkeletonTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open topology file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, "topology file " + path + ": " + e.what());
  }
  return topology_from_json(j);
}

void save_topology(const SkeletonTopology& topology, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write topology file " + path);
  out << topology_to_json(topology).dump(2) << '\n';
}

std::string topology_canonical(const SkeletonTopology& topology) {
  return topology_to_json(topology).dump();
}

void PoseSequence::validate() const {
  if (!topology) fail(ErrorCode::Schema, "pose sequence has no topology");
  if (frames.empty()) fail(ErrorCode::Schema, "pose sequence has no frames");
  const int J = topology->joint_count();
  for (int t = 0; t < frame_count(); ++t) {
    if (static_cast<int>(frames[t].size()) != J) {
      fail(ErrorCode::Schema,
           "frame " + std::to_string(t) + " has " +
               std::to_string(frames[t].size()) + " points, expected " +
               std::to_string(J));
    }
    for (int jnt = 0; jnt < J; ++jnt) {
      const Vec2& p = frames[t][jnt];
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        fail(ErrorCode::Schema, "non-finite coordinate at frame " +
                                    std::to_string(t) + ", joint \"" +
                                    topology->joints[jnt] + "\"");
      }
    }
  }
}

double mean_scale_bone_length(const PoseSequence& seq) {
  const auto [a, b] = seq.topology->scale_bone;
  double sum = 0.0;
  for (const auto& frame : seq.frames) {
    sum += (frame[b] - frame[a]).norm();
  }
  return sum / static_cast<double>(seq.frame_count());
}

PoseSequence normalize_sequence(const PoseSequence& seq) {
  seq.validate();
  const double scale = mean_scale_bone_length(seq);
  if (!(scale > 1e-9)) {
    fail(ErrorCode::DegenerateScale,
         "mean scale-bone length " + std::to_string(scale) +
             " is too small to normalize subject " + seq.subject_id);
  }
  PoseSequence out = seq;
  const double inv = 1.0 / scale;
  for (auto& frame : out.frames) {
    for (auto& p : frame) {
      p.x *= inv;
      p.y *= inv;
    }
  }
  return out;
}

}  // namespace fidget
