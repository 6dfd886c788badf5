#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fidget/classify.hpp"
#include "fidget/image.hpp"
#include "fidget/skeleton.hpp"

namespace fidget {

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0/1

  static BinaryMask zeros(int width, int height);

  bool get(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  long count() const;
};

struct PartMask {
  BodyPart part = BodyPart::LeftArm;
  BinaryMask mask;
};

// External segmentation classes delivered as per-frame mask files.
enum class MaskClass : int {
  Head = 0,
  Torso = 1,
  UpperArms = 2,
  LowerArms = 3,
  PelvisUpperLegs = 4,
  LowerLegs = 5,
};

inline constexpr int kMaskClassCount = 6;
const char* mask_class_name(MaskClass c);

struct OverlaySpec {
  std::array<std::uint8_t, 3> tint{255, 0, 0};
  double alpha = 0.45;

  void validate() const;
};

// Capsule radii as fractions of the frame diagonal, times `scale`.
struct CapsuleRadii {
  double limb = 0.06;
  double torso = 0.14;
  double head = 0.10;
  double scale = 1.0;
};

// 2-means split of a limb-class mask into left/right.  Centroids are seeded
// at the per-side reference points (mean limb-joint positions), Lloyd
// iterations run until centroid movement < 0.5 px or 100 iterations, and each
// cluster goes to the side whose reference is nearer its centroid.  When both
// clusters land on one side the whole mask goes there and the other side is
// empty.  Throws EmptyMask on an empty input; outputs partition the input.
std::pair<BinaryMask, BinaryMask> split_mask_lr(const BinaryMask& mask,
                                                Vec2 left_ref, Vec2 right_ref);

// Union of the part's bone capsules, no cross-part overlap resolution.
// Increasing a radius never removes a pixel here.
BinaryMask capsule_mask_for_part(const std::vector<Vec2>& joints,
                                 const SkeletonTopology& topology,
                                 BodyPart part, const CapsuleRadii& radii,
                                 int width, int height);

// All 5 parts with overlaps resolved by precedence: limbs claim pixels before
// HeadTorso, in canonical part order.  Outputs are disjoint.
std::array<BinaryMask, kPartCount> capsule_masks(
    const std::vector<Vec2>& joints, const SkeletonTopology& topology,
    const CapsuleRadii& radii, int width, int height);

// Tints every pixel of a flagged part's mask: out = (1-a)*src + a*tint,
// rounded half-up per channel.  Unflagged pixels are bit-identical to the
// input.  Throws DimensionMismatch when mask and frame shapes disagree.
Image render_overlay(const Image& frame, const std::vector<PartMask>& masks,
                     const std::array<bool, kPartCount>& fm_minus,
                     const OverlaySpec& spec);

// Maps pose coordinates into pixel space: the bounding box over all frames is
// fitted into the frame with a 10% margin, aspect preserved.
PoseSequence fit_pose_to_frame(const PoseSequence& seq, int width, int height);

struct RenderInputs {
  std::string frames_dir;
  std::string out_dir;                      // must exist
  const PoseSequence* pose = nullptr;       // pixel-space
  std::string masks_dir;                    // empty: capsule fallback
  std::vector<std::array<bool, kPartCount>> segment_flags;
  int window_len = 100;
  OverlaySpec spec;
  CapsuleRadii radii;
};

// Renders one overlay PNG per input frame, numbered {frame:06}.png.  Frame t
// uses the flags of segment floor(t / window_len); frames beyond the last
// full segment reuse the last segment's flags.  Writes a flags.json sidecar
// listing the tinted parts per frame.
void render_sequence(const RenderInputs& in);

}  // namespace fidget
