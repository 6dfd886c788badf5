#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fidget/skeleton.hpp"

namespace fidget {

// Per-part motion program of a synthetic subject.  Fidgety parts take
// uniformly directed per-frame steps; Monotonous parts oscillate along one
// fixed axis; Still parts only jitter below the displacement threshold.
enum class PartBehavior : int {
  Fidgety = 0,
  Monotonous = 1,
  Still = 2,
};

const char* behavior_name(PartBehavior b);
PartBehavior parse_behavior(std::string_view name);

struct SubjectProfile {
  std::string subject_id;
  std::array<PartBehavior, kPartCount> behavior{};
  int frames = 1000;
  double noise = 1e-7;  // Still jitter std dev, clamped below epsilon/4
  std::uint64_t seed = 0;
};

struct GeneratedSubject {
  PoseSequence sequence;
  VideoAnnotation annotation;  // FMMinus iff any part is Monotonous or Still
  std::array<PartBehavior, kPartCount> behavior{};
};

// Deterministic in profile.seed.  Requires the default topology.  Verifies at
// generation time that Fidgety displacement histograms are near-uniform per
// 100-frame window and that Fidgety and Monotonous joints stay separable
// (per-joint L1 distance > 0.5); violations raise InvalidProfile.
GeneratedSubject generate_subject(
    const SubjectProfile& profile,
    std::shared_ptr<const SkeletonTopology> topology,
    double displacement_epsilon);

struct Cohort {
  std::vector<GeneratedSubject> subjects;
};

// n_normal all-Fidgety subjects followed by n_abnormal subjects cycling
// through fixed Monotonous/Still patterns; ids s01, s02, ...
Cohort generate_cohort(int n_normal, int n_abnormal, int frames,
                       std::uint64_t seed,
                       std::shared_ptr<const SkeletonTopology> topology,
                       double displacement_epsilon);

}  // namespace fidget
