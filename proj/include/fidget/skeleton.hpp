#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fidget/error.hpp"

namespace fidget {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

enum class BodyPart : int {
  LeftArm = 0,
  RightArm = 1,
  LeftLeg = 2,
  RightLeg = 3,
  HeadTorso = 4,
};

inline constexpr int kPartCount = 5;
inline constexpr std::array<BodyPart, kPartCount> kAllParts = {
    BodyPart::LeftArm, BodyPart::RightArm, BodyPart::LeftLeg,
    BodyPart::RightLeg, BodyPart::HeadTorso};

const char* part_name(BodyPart part);    // "LeftArm", ...
const char* part_column(BodyPart part);  // "left_arm", ...
BodyPart parse_part(std::string_view name);

// Video-level coding is fixed: FM+ (fidgety movements present, normal) is 0,
// FM- (absent, abnormal) is 1.  Scores and metrics all use this coding.
enum class FMLabel : int {
  FMPlus = 0,
  FMMinus = 1,
};

inline int label_code(FMLabel label) { return static_cast<int>(label); }
const char* label_name(FMLabel label);    // "FM+" / "FM-"
const char* verdict_name(FMLabel label);  // "normal" / "abnormal"
FMLabel parse_label(std::string_view name);

struct PartMembers {
  std::vector<int> joints;  // indices into SkeletonTopology::joints
  std::vector<int> bones;   // indices into SkeletonTopology::bones
};

struct SkeletonTopology {
  std::vector<std::string> joints;
  std::vector<std::pair<int, int>> bones;  // (proximal, distal) joint indices
  std::array<PartMembers, kPartCount> parts;
  std::pair<int, int> scale_bone{-1, -1};

  int joint_count() const { return static_cast<int>(joints.size()); }
  int bone_count() const { return static_cast<int>(bones.size()); }

  // -1 when the name is unknown.
  int joint_index(std::string_view name) const;
  BodyPart part_of_joint(int joint) const;
  BodyPart part_of_bone(int bone) const;

  // Throws Schema when any structural invariant is violated: dangling bone
  // indices, a joint or bone outside the 5-part partition or in two parts,
  // or a scale bone that is not a member of bones.
  void validate() const;
};

SkeletonTopology default_topology();

SkeletonTopology load_topology(const std::string& path);
void save_topology(const SkeletonTopology& topology, const std::string& path);

// Canonical serialization used for model/config fingerprints.
std::string topology_canonical(const SkeletonTopology& topology);

struct PoseSequence {
  std::string subject_id;
  double fps = 30.0;
  std::vector<std::vector<Vec2>> frames;  // T frames x J joints
  std::shared_ptr<const SkeletonTopology> topology;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int joint_count() const {
    return topology ? topology->joint_count() : 0;
  }

  // Throws Schema on ragged frames or non-finite coordinates.
  void validate() const;
};

struct VideoAnnotation {
  std::string subject_id;
  FMLabel label = FMLabel::FMPlus;
};

double mean_scale_bone_length(const PoseSequence& seq);

// Scale-only normalization: divides every coordinate by the mean scale-bone
// length over all frames.  No translation is applied.  Throws DegenerateScale
// when the mean length is <= 1e-9.
PoseSequence normalize_sequence(const PoseSequence& seq);

}  // namespace fidget
