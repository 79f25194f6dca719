#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "shadowgeo/geometry.hpp"

namespace shadowgeo {

/// Straight segment x(s) = A + s (B - A), s in [0, 1].
class Segment {
 public:
  Segment(Vec a, Vec b);

  const Vec& a() const { return a_; }
  const Vec& b() const { return b_; }
  Vec at(double s) const { return a_ + s * (b_ - a_); }
  double length() const { return (b_ - a_).norm(); }
  Vec direction() const { return (b_ - a_) / length(); }
  int dimension() const { return static_cast<int>(a_.size()); }

 private:
  Vec a_;
  Vec b_;
};

/// Throws OffSurface unless both endpoints lie on the surface.
void validate_segment(const Surface& surface, const Segment& segment);

inline constexpr double kClusterTolerance = 1e-6;
inline constexpr double kContractionThreshold = 1.0 - 1e-6;
/// Uniqueness margins at or below this count as "on the medial axis".
inline constexpr double kClearanceFloor = 1e-9;

struct ProjectionOptions {
  int seeds = 16;
  std::uint64_t rng_seed = 0x5eedULL;
  int max_iterations = 80;
  double cluster_tolerance = kClusterTolerance;
  int threads = 0;
};

struct ProjectionResult {
  Vec query;
  Vec footpoint;
  double distance = 0.0;
  /// Distance gap between the best and second-best local minimum of
  /// |x - p| over distinct footpoint clusters; infinity for one cluster.
  double uniqueness_margin = std::numeric_limits<double>::infinity();
  int clusters = 0;
  bool converged = false;
};

/// Multi-start Newton solve of min |x - p| subject to F(p) = 0.
///
/// Seed 0 is the gradient-ray projection of x; further seeds are drawn
/// uniformly from the surface bounding box, from a stream fixed by
/// `rng_seed`, so a larger seed count always includes the smaller set.
ProjectionResult closest_point(const Surface& surface, const Vec& x, const ProjectionOptions& options = {});

/// Single local solve started from `start` (warm start). Returns nullopt
/// when Newton does not converge to a local minimum.
std::optional<ProjectionResult> local_closest_point(const Surface& surface, const Vec& x, const Vec& start,
                                                    int max_iterations = 80);

/// Projections at `samples` uniformly spaced segment parameters, in order.
/// Throws Convergence carrying s for the first failing sample.
std::vector<ProjectionResult> project_samples(const Surface& surface, const Segment& segment, int samples,
                                              const ProjectionOptions& options = {});

/// min over the samples of the uniqueness margin.
double medial_clearance(const Surface& surface, const Segment& segment, int samples,
                        const ProjectionOptions& options = {});

struct ContractionSample {
  double s = 0.0;
  double r = 0.0;
  double r_prime = 0.0;
  double lipschitz_ratio = 0.0;
  double uniqueness_margin = 0.0;
  bool converged = false;
};

struct ContractionAudit {
  std::vector<ContractionSample> samples;
  double clearance = 0.0;
  double max_ratio = 0.0;
  double max_abs_r_prime = 0.0;
  bool passed = false;
};

/// Local Lipschitz ratios of r along the segment and the central-difference
/// derivative of r with respect to arc length on the segment. The ratio in
/// row i is for the interval [s_i, s_{i+1}]; the last row repeats the
/// previous interval. Throws Precondition when the clearance is not positive.
ContractionAudit contraction_audit(const Surface& surface, const Segment& segment, int samples,
                                   const ProjectionOptions& options = {});

ContractionAudit contraction_audit(const Segment& segment, const std::vector<ProjectionResult>& projections);

void write_csv(std::ostream& os, const ContractionAudit& audit);

}  // namespace shadowgeo
