#pragma once

#include <string>
#include <vector>

#include "fidget/skeleton.hpp"

namespace fidget {

// Direction histograms use bin edges at k * 2*pi / bins starting from angle 0,
// counter-clockwise, half-open [edge, next_edge).
struct HistogramConfig {
  int bins = 8;
  double displacement_epsilon = 1e-6;

  void validate() const;
};

struct SegmentationScheme {
  int window_len = 100;  // non-overlapping; trailing partial window dropped

  void validate() const;
};

struct FrameRange {
  int begin = 0;
  int end = 0;  // exclusive

  int length() const { return end - begin; }
};

// floor(T / window_len) consecutive windows; throws TooShort if T < window_len.
std::vector<FrameRange> segment_windows(int frame_count,
                                        const SegmentationScheme& scheme);

// Maps atan2(dy, dx) to [0, 2*pi) and returns the bin index; 2*pi wraps to 0.
int direction_bin(double dx, double dy, int bins);

// Histogram of bone orientations, one L1-normalized histogram per bone of the
// part.  Zero-length bones contribute to no bin; a bone with no contributions
// over the window gets the uniform histogram.
std::vector<std::vector<double>> hojo2d(const PoseSequence& seq,
                                        FrameRange window, BodyPart part,
                                        const HistogramConfig& cfg);

// Histogram of joint displacement directions over consecutive frame pairs,
// one L1-normalized histogram per joint of the part.  Pairs with displacement
// below displacement_epsilon are skipped; a joint with no surviving pairs
// gets the uniform histogram.
std::vector<std::vector<double>> hojd2d(const PoseSequence& seq,
                                        FrameRange window, BodyPart part,
                                        const HistogramConfig& cfg);

struct FusedFeature {
  std::string subject_id;
  BodyPart part = BodyPart::LeftArm;
  int segment_index = 0;
  std::vector<double> vector;  // per-bone orientation blocks, then per-joint
                               // displacement blocks
  FMLabel label = FMLabel::FMPlus;
};

int fused_dimension(const SkeletonTopology& topology, BodyPart part,
                    const HistogramConfig& cfg);

// One fused feature per (window, part), ordered segment-major then part in
// canonical order.  Every feature carries the video-level label.
std::vector<FusedFeature> extract_features(const PoseSequence& seq,
                                           const VideoAnnotation& annotation,
                                           const SegmentationScheme& scheme,
                                           const HistogramConfig& cfg);

}  // namespace fidget
