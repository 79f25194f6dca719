#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "shadowgeo/geometry.hpp"
#include "shadowgeo/projection.hpp"

namespace shadowgeo {

struct CurveNode {
  Vec point;
  double s = 0.0;    // segment parameter of the projected sample
  double ell = 0.0;  // cumulative arc length
  std::optional<Vec> d1;
  std::optional<Vec> d2;
};

/// Discretized curve with arc-length parameter and optional first/second
/// arc-length derivatives per node.
struct SampledCurve {
  std::vector<CurveNode> nodes;

  std::size_t size() const { return nodes.size(); }
  int dimension() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().point.size()); }
  double length() const { return nodes.empty() ? 0.0 : nodes.back().ell; }
  bool has_derivatives() const;

  /// Builds nodes from points with cumulative chord length as ell.
  static SampledCurve from_points(const std::vector<Vec>& points);
  /// Builds nodes from points with explicit arc lengths.
  static SampledCurve from_points(const std::vector<Vec>& points, const std::vector<double>& ell);
};

struct ShadowOptions {
  int nodes = 512;  // number of intervals N; the curve has N + 1 nodes
  bool resample = true;
  bool warm_start = true;
  int max_resample_sweeps = 40;
  ProjectionOptions projection;
};

struct ShadowCurve {
  SampledCurve curve;
  double clearance = 0.0;
  int resample_sweeps = 0;
  double chord_spread = 0.0;  // max |chord - mean chord| after resampling
};

/// Projects the segment onto the surface on a uniform s-grid, then (by
/// default) moves the interior nodes along the curve until consecutive
/// chords are equal, so the nodes are uniform in arc length. Every node is
/// an exact footpoint m(x(s_i)); only the s_i move.
ShadowCurve build_shadow(const Surface& surface, const Segment& segment, const ShadowOptions& options = {});

/// Fourth-order central differences for the first derivative (fourth-order
/// one-sided at nodes 1 and N-1), second-order central differences for the
/// second derivative, on the uniform spacing length / N. Endpoints get none.
SampledCurve derivatives(SampledCurve curve);

/// max_i | |gamma'_i| - 1 | over nodes with a first derivative.
double speed_constancy_check(const SampledCurve& curve);

void write_csv(std::ostream& os, const SampledCurve& curve);

/// Compact binary cache: magic "SGCV", u32 version, u64 key, u32 dimension,
/// u64 node count, then per node s, ell, point, flag byte, d1, d2.
inline constexpr std::uint32_t kCurveCacheVersion = 1;
void write_curve_cache(const std::filesystem::path& path, const SampledCurve& curve, std::uint64_t key);
/// nullopt when the file is missing, malformed, of another version, or
/// written for a different key.
std::optional<SampledCurve> read_curve_cache(const std::filesystem::path& path, std::uint64_t key);

}  // namespace shadowgeo
