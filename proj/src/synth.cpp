#include "fidget/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "fidget/features.hpp"
#include "fidget/rng.hpp"

namespace fidget {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lying posture with every bone at least ~8 degrees away from a 45-degree
// bin edge, so Still parts keep stable orientation bins.
const std::map<std::string, Vec2>& base_pose() {
  static const std::map<std::string, Vec2> pose = {
      {"head", {0.10, -0.85}},      {"neck", {0.00, -0.50}},
      {"pelvis", {0.15, 0.48}},     {"shoulder_l", {-0.32, -0.42}},
      {"elbow_l", {-0.52, -0.02}},  {"wrist_l", {-0.82, 0.14}},
      {"shoulder_r", {0.32, -0.42}}, {"elbow_r", {0.52, -0.02}},
      {"wrist_r", {0.82, 0.14}},    {"hip_l", {-0.13, 0.56}},
      {"knee_l", {-0.37, 0.92}},    {"ankle_l", {-0.49, 1.33}},
      {"hip_r", {0.43, 0.56}},      {"knee_r", {0.67, 0.92}},
      {"ankle_r", {0.79, 1.33}},
  };
  return pose;
}

constexpr double kFidgetyStep = 0.02;
constexpr double kMonotonousAmplitude = 0.05;
constexpr double kMonotonousOmega = kTwoPi / 25.0;  // 4 cycles per 100 frames
constexpr int kStrata = 8;
constexpr int kCheckWindow = 100;

double nudge_off_bin_edges(double angle) {
  const double bin_width = kTwoPi / 8.0;
  const double frac = angle / bin_width - std::floor(angle / bin_width);
  const double margin = 3.0 * std::numbers::pi / 180.0 / bin_width;
  if (frac < margin || frac > 1.0 - margin) {
    angle += 5.0 * std::numbers::pi / 180.0;
  }
  return angle;
}

void fill_fidgety(std::vector<std::vector<Vec2>>& frames,
                  const std::vector<int>& joints, std::uint64_t seed,
                  int part_idx) {
  for (std::size_t li = 0; li < joints.size(); ++li) {
    const int j = joints[li];
    Rng rng(derive_seed(seed, {seed_tag("fidgety"),
                               static_cast<std::uint64_t>(part_idx), li}));
    const int phase = static_cast<int>(rng.below(kStrata));
    for (std::size_t t = 1; t < frames.size(); ++t) {
      // Stratified uniform directions: consecutive steps cycle through the
      // 8 sectors with a uniform draw inside each, so every 100-frame window
      // sees an almost exactly flat direction histogram.
      const int sector = (phase + static_cast<int>(t) - 1) % kStrata;
      const double theta = (sector + rng.uniform01()) * (kTwoPi / kStrata);
      frames[t][j].x = frames[t - 1][j].x + kFidgetyStep * std::cos(theta);
      frames[t][j].y = frames[t - 1][j].y + kFidgetyStep * std::sin(theta);
    }
  }
}

void fill_monotonous(std::vector<std::vector<Vec2>>& frames,
                     const std::vector<int>& joints, std::uint64_t seed,
                     int part_idx) {
  Rng rng(derive_seed(seed, {seed_tag("monotonous"),
                             static_cast<std::uint64_t>(part_idx)}));
  const double axis = nudge_off_bin_edges(rng.uniform01() * kTwoPi);
  const double phase = rng.uniform01() * kTwoPi;
  const Vec2 dir = {std::cos(axis), std::sin(axis)};
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const double offset =
        kMonotonousAmplitude * std::sin(kMonotonousOmega * t + phase);
    for (int j : joints) {
      frames[t][j] = frames[t][j] + dir * offset;
    }
  }
}

void fill_still(std::vector<std::vector<Vec2>>& frames,
                const std::vector<int>& joints, std::uint64_t seed,
                int part_idx, double noise, double epsilon) {
  // Any two jitter offsets stay within epsilon/2 of each other, so every
  // displacement pair is skipped and the displacement histogram falls back
  // to uniform exactly.
  const double clamp_radius = 0.24 * epsilon;
  for (std::size_t li = 0; li < joints.size(); ++li) {
    const int j = joints[li];
    Rng rng(derive_seed(seed, {seed_tag("still"),
                               static_cast<std::uint64_t>(part_idx), li}));
    for (auto& frame : frames) {
      Vec2 g = {rng.gaussian() * noise, rng.gaussian() * noise};
      const double n = g.norm();
      if (n > clamp_radius) g = g * (clamp_radius / n);
      frame[j] = frame[j] + g;
    }
  }
}

void check_separability(const PoseSequence& seq,
                        const std::array<PartBehavior, kPartCount>& behavior,
                        double epsilon) {
  if (seq.frame_count() < 2) return;
  HistogramConfig cfg;
  cfg.displacement_epsilon = epsilon;
  SegmentationScheme scheme;
  scheme.window_len = std::min(kCheckWindow, seq.frame_count());

  std::vector<int> fidgety_joints, monotonous_joints;
  for (BodyPart part : kAllParts) {
    const auto& joints = seq.topology->parts[static_cast<int>(part)].joints;
    auto& dst = behavior[static_cast<int>(part)] == PartBehavior::Fidgety
                    ? fidgety_joints
                    : monotonous_joints;
    if (behavior[static_cast<int>(part)] == PartBehavior::Still) continue;
    dst.insert(dst.end(), joints.begin(), joints.end());
  }

  for (const auto& window : segment_windows(seq.frame_count(), scheme)) {
    std::map<int, std::vector<double>> hist;
    auto joint_hist = [&](int j) -> const std::vector<double>& {
      auto it = hist.find(j);
      if (it != hist.end()) return it->second;
      std::vector<double> h(cfg.bins, 0.0);
      double total = 0.0;
      for (int t = window.begin; t + 1 < window.end; ++t) {
        const Vec2 d = seq.frames[t + 1][j] - seq.frames[t][j];
        if (d.norm() < cfg.displacement_epsilon) continue;
        h[direction_bin(d.x, d.y, cfg.bins)] += 1.0;
        total += 1.0;
      }
      if (total > 0.0) {
        for (double& v : h) v /= total;
      } else {
        for (double& v : h) v = 1.0 / cfg.bins;
      }
      return hist.emplace(j, std::move(h)).first->second;
    };

    for (int j : fidgety_joints) {
      const auto& h = joint_hist(j);
      const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
      if (*hi - *lo >= 0.15) {
        fail(ErrorCode::InvalidProfile,
             "fidgety joint " + seq.topology->joints[j] +
                 " has an uneven displacement histogram in window [" +
                 std::to_string(window.begin) + ", " +
                 std::to_string(window.end) + ")");
      }
    }
    for (int jf : fidgety_joints) {
      const auto& hf = joint_hist(jf);
      for (int jm : monotonous_joints) {
        const auto& hm = joint_hist(jm);
        double l1 = 0.0;
        for (int b = 0; b < cfg.bins; ++b) l1 += std::abs(hf[b] - hm[b]);
        if (l1 <= 0.5) {
          fail(ErrorCode::InvalidProfile,
               "fidgety joint " + seq.topology->joints[jf] +
                   " and monotonous joint " + seq.topology->joints[jm] +
                   " are not separable in window [" +
                   std::to_string(window.begin) + ", " +
                   std::to_string(window.end) + ")");
        }
      }
    }
  }
}

}  // namespace

const char* behavior_name(PartBehavior b) {
  switch (b) {
    case PartBehavior::Fidgety: return "fidgety";
    case PartBehavior::Monotonous: return "monotonous";
    case PartBehavior::Still: return "still";
  }
  return "unknown";
}

PartBehavior parse_behavior(std::string_view name) {
  if (name == "fidgety") return PartBehavior::Fidgety;
  if (name == "monotonous") return PartBehavior::Monotonous;
  if (name == "still") return PartBehavior::Still;
  fail(ErrorCode::Schema, "unknown behavior \"" + std::string(name) + "\"");
}

GeneratedSubject generate_subject(
    const SubjectProfile& profile,
    std::shared_ptr<const SkeletonTopology> topology,
    double displacement_epsilon) {
  if (profile.subject_id.empty()) {
    fail(ErrorCode::InvalidProfile, "subject_id must not be empty");
  }
  if (profile.frames < 2) {
    fail(ErrorCode::InvalidProfile, "a subject needs at least 2 frames");
  }
  if (profile.noise < 0.0) {
    fail(ErrorCode::InvalidProfile, "noise must be >= 0");
  }
  if (!topology) fail(ErrorCode::InvalidProfile, "topology is required");

  std::vector<Vec2> base(topology->joint_count());
  for (int j = 0; j < topology->joint_count(); ++j) {
    auto it = base_pose().find(topology->joints[j]);
    if (it == base_pose().end()) {
      fail(ErrorCode::InvalidProfile,
           "synthetic generation requires the default joint set; \"" +
               topology->joints[j] + "\" has no base position");
    }
    base[j] = it->second;
  }

  GeneratedSubject out;
  out.behavior = profile.behavior;
  out.sequence.subject_id = profile.subject_id;
  out.sequence.fps = 30.0;
  out.sequence.topology = topology;
  out.sequence.frames.assign(profile.frames, base);

  bool any_abnormal = false;
  for (BodyPart part : kAllParts) {
    const int pi = static_cast<int>(part);
    const auto& joints = topology->parts[pi].joints;
    switch (profile.behavior[pi]) {
      case PartBehavior::Fidgety:
        fill_fidgety(out.sequence.frames, joints, profile.seed, pi);
        break;
      case PartBehavior::Monotonous:
        fill_monotonous(out.sequence.frames, joints, profile.seed, pi);
        any_abnormal = true;
        break;
      case PartBehavior::Still:
        fill_still(out.sequence.frames, joints, profile.seed, pi,
                   profile.noise, displacement_epsilon);
        any_abnormal = true;
        break;
    }
  }
  out.annotation = {profile.subject_id,
                    any_abnormal ? FMLabel::FMMinus : FMLabel::FMPlus};

  check_separability(out.sequence, profile.behavior, displacement_epsilon);
  return out;
}

Cohort generate_cohort(int n_normal, int n_abnormal, int frames,
                       std::uint64_t seed,
                       std::shared_ptr<const SkeletonTopology> topology,
                       double displacement_epsilon) {
  if (n_normal < 0 || n_abnormal < 0 || n_normal + n_abnormal < 2) {
    fail(ErrorCode::InvalidProfile, "a cohort needs at least 2 subjects");
  }

  // Abnormal subjects cycle through fixed per-part patterns.
  const PartBehavior M = PartBehavior::Monotonous;
  const PartBehavior S = PartBehavior::Still;
  const std::array<std::array<PartBehavior, kPartCount>, 4> patterns = {{
      {M, M, M, M, M},
      {S, S, S, S, S},
      {M, S, M, S, M},
      {S, M, S, M, S},
  }};

  Cohort cohort;
  const int total = n_normal + n_abnormal;
  int width = 2;
  for (int v = total; v >= 100; v /= 10) ++width;
  for (int i = 0; i < total; ++i) {
    SubjectProfile profile;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%0*d", width, i + 1);
    profile.subject_id = buf;
    profile.frames = frames;
    profile.seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    if (i < n_normal) {
      profile.behavior.fill(PartBehavior::Fidgety);
    } else {
      profile.behavior = patterns[(i - n_normal) % patterns.size()];
    }
    cohort.subjects.push_back(
        generate_subject(profile, topology, displacement_epsilon));
  }
  return cohort;
}

}  // namespace fidget
