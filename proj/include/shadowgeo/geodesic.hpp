#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "shadowgeo/geometry.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/shadow_curve.hpp"

namespace shadowgeo {

enum class Verdict { Positive, Negative, Inconclusive };

/// Banded decision: Positive if value <= tol, Negative if value >= 10 tol.
Verdict band(double value, double tol);

/// "geodesic" / "not-geodesic" / "inconclusive".
const char* geodesic_label(Verdict v);
/// "coplanar" / "not-coplanar" / "inconclusive".
const char* coplanar_label(Verdict v);

inline constexpr double kDefaultDefectTolerance = 1e-5;
inline constexpr double kDefaultPlanarTolerance = 1e-6;

struct GeodesicReport {
  double defect = 0.0;
  double speed_dev = 0.0;
  double tolerance = kDefaultDefectTolerance;
  Verdict verdict = Verdict::Inconclusive;
  /// Tangential acceleration norm per node; NaN where not evaluated.
  std::vector<double> node_defects;
  std::size_t excluded_nodes = 0;
};

/// Tangential part of gamma'' at every interior node. Nodes flagged in
/// `exclude` are skipped and counted.
GeodesicReport geodesic_defect(const Surface& surface, const SampledCurve& curve, double tol,
                               const std::vector<bool>* exclude = nullptr);

void write_csv(std::ostream& os, const SampledCurve& curve, const GeodesicReport& report);

struct CoplanarityReport {
  double residual = 0.0;  // max node distance to the plane, over the curve diameter
  double max_distance = 0.0;
  double diameter = 0.0;
  Vec in_plane;  // unit vector orthogonal to AB spanning the plane with it
  Vec normal;    // unit vector orthogonal to the plane (worst direction for n > 3)
};

/// Best plane through the line AB: the dominant singular direction of node
/// offsets taken orthogonally to AB.
CoplanarityReport coplanarity(const Segment& segment, const SampledCurve& curve);

/// Level-set geodesic flow gamma'' = -(v^T H v / |grad F|^2) grad F with RK4,
/// followed after every step by a Gauss-Newton return of the position to
/// F = 0 and a tangential projection and renormalization of the velocity.
SampledCurve integrate_geodesic(const Surface& surface, const Vec& p0, const Vec& v0, double length,
                                double step);

struct AuditOptions {
  int nodes = 512;
  double tol = kDefaultDefectTolerance;
  double planar_tol = kDefaultPlanarTolerance;
  /// Nodes whose distance to the segment is below this fraction of the
  /// curve diameter are excluded from the defect.
  double exclusion_ratio = 1e-6;
  ShadowOptions shadow;
};

struct Theorem1Report {
  ShadowCurve shadow;  // with derivatives
  GeodesicReport geodesic;
  CoplanarityReport coplanarity;
  Verdict planar_verdict = Verdict::Inconclusive;
  double tol = kDefaultDefectTolerance;
  double planar_tol = kDefaultPlanarTolerance;
  /// (defect <= tol) == (residual <= planar_tol)
  bool consistent = false;
  /// Chord spread small enough that it moves gamma'' by at most tol / 10;
  /// otherwise the geodesic verdict is downgraded to inconclusive.
  bool resolved = false;
  /// both verdicts outside their inconclusive bands
  bool definitive = false;
};

Theorem1Report theorem1_audit(const Surface& surface, const Segment& segment, const AuditOptions& options = {});
/// Same audit on an already built shadow curve (derivatives are recomputed).
Theorem1Report theorem1_audit(const Surface& surface, const Segment& segment, ShadowCurve shadow,
                              const AuditOptions& options = {});

}  // namespace shadowgeo
