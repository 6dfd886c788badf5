#include "fidget/features.hpp"

#include <cmath>
#include <numbers>

namespace fidget {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void normalize_or_uniform(std::vector<double>& hist) {
  double total = 0.0;
  for (double v : hist) total += v;
  if (total <= 0.0) {
    const double u = 1.0 / static_cast<double>(hist.size());
    for (double& v : hist) v = u;
    return;
  }
  for (double& v : hist) v /= total;
}

void check_window(const PoseSequence& seq, FrameRange window) {
  if (window.begin < 0 || window.end > seq.frame_count() ||
      window.begin >= window.end) {
    fail(ErrorCode::InvalidArgument,
         "window [" + std::to_string(window.begin) + ", " +
             std::to_string(window.end) + ") is outside the sequence");
  }
}

}  // namespace

void HistogramConfig::validate() const {
  if (bins < 2) fail(ErrorCode::InvalidArgument, "bins must be >= 2");
  if (!(displacement_epsilon > 0.0)) {
    fail(ErrorCode::InvalidArgument, "displacement_epsilon must be > 0");
  }
}

void SegmentationScheme::validate() const {
  if (window_len < 2) {
    fail(ErrorCode::InvalidArgument, "window_len must be >= 2");
  }
}

std::vector<FrameRange> segment_windows(int frame_count,
                                        const SegmentationScheme& scheme) {
  scheme.validate();
  if (frame_count < scheme.window_len) {
    fail(ErrorCode::TooShort,
         "sequence of " + std::to_string(frame_count) +
             " frames is shorter than one " +
             std::to_string(scheme.window_len) + "-frame window");
  }
  const int n = frame_count / scheme.window_len;
  std::vector<FrameRange> windows;
  windows.reserve(n);
  for (int k = 0; k < n; ++k) {
    windows.push_back({k * scheme.window_len, (k + 1) * scheme.window_len});
  }
  return windows;
}

int direction_bin(double dx, double dy, int bins) {
  double theta = std::atan2(dy, dx);
  if (theta < 0.0) theta += kTwoPi;
  int b = static_cast<int>(theta / (kTwoPi / bins));
  return b >= bins ? 0 : b;  // theta rounding up to 2*pi wraps to bin 0
}

std::vector<std::vector<double>> hojo2d(const PoseSequence& seq,
                                        FrameRange window, BodyPart part,
                                        const HistogramConfig& cfg) {
  cfg.validate();
  check_window(seq, window);
  const auto& bones = seq.topology->parts[static_cast<int>(part)].bones;
  if (bones.empty()) {
    fail(ErrorCode::InvalidArgument,
         std::string(part_name(part)) + " has no bones");
  }

  std::vector<std::vector<double>> hists(
      bones.size(), std::vector<double>(cfg.bins, 0.0));
  for (std::size_t bi = 0; bi < bones.size(); ++bi) {
    const auto [prox, dist] = seq.topology->bones[bones[bi]];
    auto& hist = hists[bi];
    for (int t = window.begin; t < window.end; ++t) {
      const Vec2 d = seq.frames[t][dist] - seq.frames[t][prox];
      if (d.x == 0.0 && d.y == 0.0) continue;  // zero-length bone, no bin
      hist[direction_bin(d.x, d.y, cfg.bins)] += 1.0;
    }
    normalize_or_uniform(hist);
  }
  return hists;
}

std::vector<std::vector<double>> hojd2d(const PoseSequence& seq,
                                        FrameRange window, BodyPart part,
                                        const HistogramConfig& cfg) {
  cfg.validate();
  check_window(seq, window);
  if (window.length() < 2) {
    fail(ErrorCode::InvalidArgument,
         "displacement histograms need a window of at least 2 frames");
  }
  const auto& joints = seq.topology->parts[static_cast<int>(part)].joints;
  if (joints.empty()) {
    fail(ErrorCode::InvalidArgument,
         std::string(part_name(part)) + " has no joints");
  }

  std::vector<std::vector<double>> hists(
      joints.size(), std::vector<double>(cfg.bins, 0.0));
  for (std::size_t ji = 0; ji < joints.size(); ++ji) {
    const int j = joints[ji];
    auto& hist = hists[ji];
    for (int t = window.begin; t + 1 < window.end; ++t) {
      const Vec2 d = seq.frames[t + 1][j] - seq.frames[t][j];
      if (d.norm() < cfg.displacement_epsilon) continue;
      hist[direction_bin(d.x, d.y, cfg.bins)] += 1.0;
    }
    normalize_or_uniform(hist);
  }
  return hists;
}

int fused_dimension(const SkeletonTopology& topology, BodyPart part,
                    const HistogramConfig& cfg) {
  const auto& members = topology.parts[static_cast<int>(part)];
  return cfg.bins *
         static_cast<int>(members.bones.size() + members.joints.size());
}

std::vector<FusedFeature> extract_features(const PoseSequence& seq,
                                           const VideoAnnotation& annotation,
                                           const SegmentationScheme& scheme,
                                           const HistogramConfig& cfg) {
  const auto windows = segment_windows(seq.frame_count(), scheme);
  std::vector<FusedFeature> features;
  features.reserve(windows.size() * kPartCount);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (BodyPart part : kAllParts) {
      FusedFeature f;
      f.subject_id = seq.subject_id;
      f.part = part;
      f.segment_index = static_cast<int>(w);
      f.label = annotation.label;
      const auto orient = hojo2d(seq, windows[w], part, cfg);
      const auto disp = hojd2d(seq, windows[w], part, cfg);
      f.vector.reserve(
          static_cast<std::size_t>(fused_dimension(*seq.topology, part, cfg)));
      for (const auto& h : orient) f.vector.insert(f.vector.end(), h.begin(), h.end());
      for (const auto& h : disp) f.vector.insert(f.vector.end(), h.begin(), h.end());
      features.push_back(std::move(f));
    }
  }
  return features;
}

}  // namespace fidget
