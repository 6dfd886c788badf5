#include "fidget/viz.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "fidget/image.hpp"

namespace fs = std::filesystem;

namespace fidget {

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.data.assign(static_cast<std::size_t>(width) * height, 0);
  return m;
}

long BinaryMask::count() const {
  long n = 0;
  for (auto v : data) n += v != 0;
  return n;
}

const char* mask_class_name(MaskClass c) {
  switch (c) {
    case MaskClass::Head: return "head";
    case MaskClass::Torso: return "torso";
    case MaskClass::UpperArms: return "upper_arms";
    case MaskClass::LowerArms: return "lower_arms";
    case MaskClass::PelvisUpperLegs: return "pelvis_upper_legs";
    case MaskClass::LowerLegs: return "lower_legs";
  }
  return "unknown";
}

void OverlaySpec::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    fail(ErrorCode::InvalidArgument, "overlay alpha must be in (0, 1)");
  }
}

namespace {

double sqdist(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::pair<BinaryMask, BinaryMask> split_mask_lr(const BinaryMask& mask,
                                                Vec2 left_ref,
                                                Vec2 right_ref) {
  std::vector<Vec2> points;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.get(x, y)) {
        points.push_back({static_cast<double>(x), static_cast<double>(y)});
      }
    }
  }
  if (points.empty()) fail(ErrorCode::EmptyMask, "mask has no pixels");

  // Lloyd iterations with the side references as seeds; ties go to the
  // first centroid, empty clusters keep their previous centroid.
  Vec2 c[2] = {left_ref, right_ref};
  std::vector<int> assign(points.size(), 0);
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      assign[i] = sqdist(points[i], c[1]) < sqdist(points[i], c[0]) ? 1 : 0;
    }
    Vec2 sum[2] = {{0, 0}, {0, 0}};
    long n[2] = {0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
      sum[assign[i]] = sum[assign[i]] + points[i];
      n[assign[i]] += 1;
    }
    double movement = 0.0;
    for (int k = 0; k < 2; ++k) {
      if (n[k] == 0) continue;
      Vec2 next = sum[k] * (1.0 / static_cast<double>(n[k]));
      movement = std::max(movement, (next - c[k]).norm());
      c[k] = next;
    }
    if (movement < 0.5) break;
  }

  // Each cluster joins the side whose reference is nearer its centroid; when
  // both choose the same side, that side takes the whole mask.
  const int side0 = sqdist(c[0], right_ref) < sqdist(c[0], left_ref) ? 1 : 0;
  const int side1 = sqdist(c[1], right_ref) < sqdist(c[1], left_ref) ? 1 : 0;

  BinaryMask left = BinaryMask::zeros(mask.width, mask.height);
  BinaryMask right = BinaryMask::zeros(mask.width, mask.height);
  std::size_t i = 0;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      int side;
      if (side0 == side1) {
        side = side0;
      } else {
        side = assign[i] == 0 ? side0 : side1;
      }
      (side == 0 ? left : right).set(x, y, true);
      ++i;
    }
  }
  return {std::move(left), std::move(right)};
}

namespace {

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return (p - a).norm();
  double t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 proj = {a.x + t * ab.x, a.y + t * ab.y};
  return (p - proj).norm();
}

double bone_radius(const SkeletonTopology& topology, int bone,
                   const CapsuleRadii& radii, double diag) {
  const BodyPart part = topology.part_of_bone(bone);
  double coef = radii.limb;
  if (part == BodyPart::HeadTorso) {
    const auto [a, b] = topology.bones[bone];
    const int head = topology.joint_index("head");
    coef = (head >= 0 && (a == head || b == head)) ? radii.head : radii.torso;
  }
  return coef * radii.scale * diag;
}

void add_capsule(BinaryMask& mask, Vec2 a, Vec2 b, double r) {
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
  const int x1 = std::min(mask.width - 1,
                          static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
  const int y1 = std::min(mask.height - 1,
                          static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Vec2 p = {static_cast<double>(x), static_cast<double>(y)};
      if (dist_point_segment(p, a, b) <= r) mask.set(x, y, true);
    }
  }
}

}  // namespace

BinaryMask capsule_mask_for_part(const std::vector<Vec2>& joints,
                                 const SkeletonTopology& topology,
                                 BodyPart part, const CapsuleRadii& radii,
                                 int width, int height) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  const double diag = std::hypot(static_cast<double>(width),
                                 static_cast<double>(height));
  for (int bone : topology.parts[static_cast<int>(part)].bones) {
    const auto [a, b] = topology.bones[bone];
    add_capsule(mask, joints[a], joints[b],
                bone_radius(topology, bone, radii, diag));
  }
  return mask;
}

std::array<BinaryMask, kPartCount> capsule_masks(
    const std::vector<Vec2>& joints, const SkeletonTopology& topology,
    const CapsuleRadii& radii, int width, int height) {
  std::array<BinaryMask, kPartCount> out;
  BinaryMask claimed = BinaryMask::zeros(width, height);
  for (BodyPart part : kAllParts) {  // canonical order: limbs before HeadTorso
    BinaryMask mask =
        capsule_mask_for_part(joints, topology, part, radii, width, height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
      if (mask.data[i] && claimed.data[i]) mask.data[i] = 0;
      claimed.data[i] |= mask.data[i];
    }
    out[static_cast<int>(part)] = std::move(mask);
  }
  return out;
}

Image render_overlay(const Image& frame, const std::vector<PartMask>& masks,
                     const std::array<bool, kPartCount>& fm_minus,
                     const OverlaySpec& spec) {
  spec.validate();
  if (frame.channels != 3) {
    fail(ErrorCode::InvalidArgument, "overlay rendering needs an RGB frame");
  }
  BinaryMask flagged = BinaryMask::zeros(frame.width, frame.height);
  for (const auto& pm : masks) {
    if (pm.mask.width != frame.width || pm.mask.height != frame.height) {
      fail(ErrorCode::DimensionMismatch,
           std::string(part_name(pm.part)) + " mask is " +
               std::to_string(pm.mask.width) + "x" +
               std::to_string(pm.mask.height) + ", frame is " +
               std::to_string(frame.width) + "x" +
               std::to_string(frame.height));
    }
    if (!fm_minus[static_cast<int>(pm.part)]) continue;
    for (std::size_t i = 0; i < flagged.data.size(); ++i) {
      flagged.data[i] |= pm.mask.data[i];
    }
  }

  Image out = frame;
  const double a = spec.alpha;
  for (std::size_t i = 0; i < flagged.data.size(); ++i) {
    if (!flagged.data[i]) continue;
    for (int ch = 0; ch < 3; ++ch) {
      const double src = out.pixels[i * 3 + ch];
      const double blended = (1.0 - a) * src + a * spec.tint[ch];
      out.pixels[i * 3 + ch] =
          static_cast<std::uint8_t>(std::floor(blended + 0.5));
    }
  }
  return out;
}

PoseSequence fit_pose_to_frame(const PoseSequence& seq, int width,
                               int height) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& frame : seq.frames) {
    for (const auto& p : frame) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }
  const double bw = max_x - min_x;
  const double bh = max_y - min_y;
  double scale = 1.0;
  if (bw > 0.0 || bh > 0.0) {
    scale = std::min(bw > 0.0 ? 0.8 * width / bw
                              : std::numeric_limits<double>::infinity(),
                     bh > 0.0 ? 0.8 * height / bh
                              : std::numeric_limits<double>::infinity());
  }
  const Vec2 center = {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0};
  PoseSequence out = seq;
  for (auto& frame : out.frames) {
    for (auto& p : frame) {
      p.x = (p.x - center.x) * scale + width / 2.0;
      p.y = (p.y - center.y) * scale + height / 2.0;
    }
  }
  return out;
}

namespace {

std::string frame_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return buf;
}

BinaryMask image_to_mask(const Image& img) {
  BinaryMask m = BinaryMask::zeros(img.width, img.height);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] = img.pixels[i] >= 128 ? 1 : 0;
  }
  return m;
}

void union_into(BinaryMask& acc, const BinaryMask& m) {
  if (acc.width == 0) {
    acc = m;
    return;
  }
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] |= m.data[i];
}

// Per-side reference point of a limb mask class: the midpoint of the two
// joints the class spans.
Vec2 class_side_ref(MaskClass c, const std::vector<Vec2>& joints,
                    const SkeletonTopology& topology, bool left) {
  auto joint = [&](const char* base) {
    const int idx =
        topology.joint_index(std::string(base) + (left ? "_l" : "_r"));
    if (idx < 0) {
      fail(ErrorCode::Schema,
           std::string("mask splitting needs joint \"") + base +
               (left ? "_l" : "_r") + "\" in the topology");
    }
    return joints[idx];
  };
  switch (c) {
    case MaskClass::UpperArms:
      return (joint("shoulder") + joint("elbow")) * 0.5;
    case MaskClass::LowerArms:
      return (joint("elbow") + joint("wrist")) * 0.5;
    case MaskClass::PelvisUpperLegs:
      return (joint("hip") + joint("knee")) * 0.5;
    case MaskClass::LowerLegs:
      return (joint("knee") + joint("ankle")) * 0.5;
    default:
      fail(ErrorCode::InvalidArgument, "not a limb mask class");
  }
}

// Assembles the 5 part masks of one frame from per-class mask files; returns
// false when no mask file exists for the frame.
bool masks_from_files(const std::string& masks_dir, int frame_index,
                      const std::vector<Vec2>& joints,
                      const SkeletonTopology& topology, int width, int height,
                      std::array<BinaryMask, kPartCount>& out) {
  const std::string stem = frame_stem(frame_index);
  bool any = false;
  std::array<BinaryMask, kPartCount> parts;
  for (auto& m : parts) m = BinaryMask::zeros(width, height);

  for (int ci = 0; ci < kMaskClassCount; ++ci) {
    const MaskClass c = static_cast<MaskClass>(ci);
    const fs::path path =
        fs::path(masks_dir) / (stem + "_" + mask_class_name(c) + ".png");
    if (!fs::exists(path)) continue;
    any = true;
    const Image img = read_png(path.string(), 1);
    if (img.width != width || img.height != height) {
      fail(ErrorCode::DimensionMismatch,
           "mask " + path.string() + " does not match the frame size");
    }
    BinaryMask mask = image_to_mask(img);
    if (c == MaskClass::Head || c == MaskClass::Torso) {
      union_into(parts[static_cast<int>(BodyPart::HeadTorso)], mask);
      continue;
    }
    if (mask.count() == 0) continue;
    const Vec2 lref = class_side_ref(c, joints, topology, true);
    const Vec2 rref = class_side_ref(c, joints, topology, false);
    auto [left, right] = split_mask_lr(mask, lref, rref);
    const bool arms = c == MaskClass::UpperArms || c == MaskClass::LowerArms;
    union_into(parts[static_cast<int>(arms ? BodyPart::LeftArm
                                           : BodyPart::LeftLeg)],
               left);
    union_into(parts[static_cast<int>(arms ? BodyPart::RightArm
                                           : BodyPart::RightLeg)],
               right);
  }
  if (!any) return false;

  // Same precedence rule as the capsule path: limbs claim pixels first.
  BinaryMask claimed = BinaryMask::zeros(width, height);
  for (BodyPart part : kAllParts) {
    auto& mask = parts[static_cast<int>(part)];
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
      if (mask.data[i] && claimed.data[i]) mask.data[i] = 0;
      claimed.data[i] |= mask.data[i];
    }
  }
  out = std::move(parts);
  return true;
}

}  // namespace

void render_sequence(const RenderInputs& in) {
  in.spec.validate();
  if (!in.pose) fail(ErrorCode::InvalidArgument, "render needs a pose");
  if (in.segment_flags.empty()) {
    fail(ErrorCode::InvalidArgument, "render needs at least one segment");
  }
  if (in.window_len < 1) {
    fail(ErrorCode::InvalidArgument, "window_len must be >= 1");
  }

  std::vector<fs::path> frame_files;
  if (fs::is_directory(in.frames_dir)) {
    for (const auto& e : fs::directory_iterator(in.frames_dir)) {
      if (e.path().extension() == ".png") frame_files.push_back(e.path());
    }
  }
  if (frame_files.empty()) {
    fail(ErrorCode::Io, "no PNG frames in " + in.frames_dir);
  }
  std::sort(frame_files.begin(), frame_files.end());
  if (in.pose->frame_count() < static_cast<int>(frame_files.size())) {
    fail(ErrorCode::Schema,
         "pose has " + std::to_string(in.pose->frame_count()) +
             " frames but " + std::to_string(frame_files.size()) +
             " images were supplied");
  }

  const int n_segments = static_cast<int>(in.segment_flags.size());
  nlohmann::json flag_log = nlohmann::json::array();
  PoseSequence pixel_pose;  // fitted lazily, only when masks are needed
  bool fitted = false;

  for (std::size_t t = 0; t < frame_files.size(); ++t) {
    const Image frame = read_png(frame_files[t].string(), 3);
    // Frames past the last full segment reuse the last segment's flags.
    const int seg =
        std::min(static_cast<int>(t) / in.window_len, n_segments - 1);
    const auto& flags = in.segment_flags[seg];

    if (!fitted) {
      pixel_pose = fit_pose_to_frame(*in.pose, frame.width, frame.height);
      fitted = true;
    }
    const auto& joints = pixel_pose.frames[t];

    std::array<BinaryMask, kPartCount> parts;
    bool have_masks = false;
    if (!in.masks_dir.empty()) {
      have_masks =
          masks_from_files(in.masks_dir, static_cast<int>(t), joints,
                           *in.pose->topology, frame.width, frame.height, parts);
    }
    if (!have_masks) {
      parts = capsule_masks(joints, *in.pose->topology, in.radii, frame.width,
                            frame.height);
    }

    std::vector<PartMask> part_masks;
    part_masks.reserve(kPartCount);
    for (BodyPart part : kAllParts) {
      part_masks.push_back({part, std::move(parts[static_cast<int>(part)])});
    }
    const Image out = render_overlay(frame, part_masks, flags, in.spec);
    write_png(out, (fs::path(in.out_dir) / (frame_stem(static_cast<int>(t)) +
                                            ".png")).string());

    auto tinted = nlohmann::json::array();
    for (BodyPart part : kAllParts) {
      if (flags[static_cast<int>(part)]) tinted.push_back(part_name(part));
    }
    flag_log.push_back({{"frame", t}, {"fm_minus_parts", tinted}});
  }

  std::ofstream flags_out(fs::path(in.out_dir) / "flags.json");
  if (!flags_out) fail(ErrorCode::Io, "cannot write flags.json");
  flags_out << flag_log.dump(2) << '\n';
}

}  // namespace fidget
