#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shadowgeo/geometry.hpp"
#include "shadowgeo/interpolation.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/shadow_curve.hpp"

namespace shadowgeo {

/// Radius profile R(x) of a surface of revolution. The level-set form uses
/// R^2 and its derivatives, which stay smooth where R itself has a square
/// root (sphere caps).
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double radius(double x) const = 0;
  virtual double slope(double x) const = 0;  // R'
  virtual double square(double x) const { const double r = radius(x); return r * r; }
  virtual double square_d1(double x) const { return 2.0 * radius(x) * slope(x); }
  virtual double square_d2(double x) const = 0;
  virtual std::string name() const = 0;
};

using ProfilePtr = std::shared_ptr<const Profile>;

class ConstantProfile final : public Profile {
 public:
  explicit ConstantProfile(double c);
  double radius(double) const override { return c_; }
  double slope(double) const override { return 0.0; }
  double square_d2(double) const override { return 0.0; }
  std::string name() const override { return "constant"; }

 private:
  double c_;
};

/// R = c0 + c1 x.
class AffineProfile final : public Profile {
 public:
  AffineProfile(double c0, double c1) : c0_(c0), c1_(c1) {}
  double radius(double x) const override { return c0_ + c1_ * x; }
  double slope(double) const override { return c1_; }
  double square_d2(double) const override { return 2.0 * c1_ * c1_; }
  std::string name() const override { return "affine"; }

 private:
  double c0_, c1_;
};

/// R = sqrt(rho^2 - x^2): the sphere of radius rho about the origin.
class SphereCapProfile final : public Profile {
 public:
  explicit SphereCapProfile(double rho);
  double radius(double x) const override;
  double slope(double x) const override;
  double square(double x) const override { return rho_ * rho_ - x * x; }
  double square_d1(double x) const override { return -2.0 * x; }
  double square_d2(double) const override { return -2.0; }
  std::string name() const override { return "sphere-cap"; }

 private:
  double rho_;
};

/// R = c0 + c2 x^2.
class ParabolicProfile final : public Profile {
 public:
  ParabolicProfile(double c0, double c2) : c0_(c0), c2_(c2) {}
  double radius(double x) const override { return c0_ + c2_ * x * x; }
  double slope(double x) const override { return 2.0 * c2_ * x; }
  double square_d2(double x) const override;
  std::string name() const override { return "parabolic"; }

 private:
  double c0_, c2_;
};

/// Sampled (x, R) table through a cubic Hermite spline; monotone cubic
/// slopes unless slopes are given.
class TableProfile final : public Profile {
 public:
  TableProfile(std::vector<double> x, std::vector<double> r);
  TableProfile(std::vector<double> x, std::vector<double> r, std::vector<double> slopes);
  double radius(double x) const override { return spline_.value(x); }
  double slope(double x) const override { return spline_.derivative(x); }
  double square_d2(double x) const override;
  std::string name() const override { return "table"; }
  const HermiteSpline& spline() const { return spline_; }

 private:
  HermiteSpline spline_;
};

/// |y|^2 = R(x)^2 in R x R^{n-1}; the axis is the first coordinate.
class RevolutionSurface final : public Surface {
 public:
  RevolutionSurface(ProfilePtr profile, double lo, double hi, int dimension);

  int dimension() const override { return dimension_; }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "revolution"; }
  bool in_domain(const Vec& p) const override;

  const Profile& profile() const { return *profile_; }
  const ProfilePtr& profile_ptr() const { return profile_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Point at axial coordinate x in the direction of the unit vector
  /// `radial` (orthogonal to the axis).
  Vec point(double x, const Vec& radial) const;

 private:
  ProfilePtr profile_;
  double lo_, hi_;
  int dimension_;
  Box box_;
};

inline constexpr double kAxisExclusion = 1e-9;

struct MeridianFrame {
  Vec point;
  Vec radial;  // unit axis offset direction
  Vec mer;     // unit meridian tangent, positive along the axis
};

MeridianFrame meridian_at(const RevolutionSurface& surface, const Vec& p);

struct ClairautRow {
  double ell = 0.0;
  double R = 0.0;  // distance to the axis
  double sin_theta = 0.0;
  double product = 0.0;  // R sin(theta)
  double wedge = 0.0;    // signed gamma ^ gamma' ^ axis
  bool on_axis = false;
};

struct ClairautTable {
  std::vector<ClairautRow> rows;
  double product_mean = 0.0;
  double wedge_mean = 0.0;
  double product_drift = 0.0;      // max |product - mean|
  double wedge_drift = 0.0;        // max |wedge - mean|
  double multivector_drift = 0.0;  // max |trivector - mean trivector|
  double form_gap = 0.0;           // max | |wedge| - product |
  std::size_t on_axis_nodes = 0;
  double length = 0.0;
};

/// Both forms of the Clairaut invariant at every node carrying a first
/// derivative. Nodes within kAxisExclusion of the axis are reported with
/// on_axis set and left out of the statistics.
ClairautTable clairaut_invariants(const RevolutionSurface& surface, const SampledCurve& curve);

void write_csv(std::ostream& os, const ClairautTable& table);

/// Re-expresses a curve in the frame (origin, basis): p -> basis^T (p - origin),
/// derivatives -> basis^T d.
SampledCurve to_frame(const SampledCurve& curve, const Vec& origin, const Mat& basis);

/// Orthonormal basis whose first column is the unit vector `axis`.
Mat axis_basis(const Vec& axis);

struct ReachRow {
  double invariant = 0.0;
  double min_R = 0.0;
  bool violated = false;
};

struct ReachReport {
  std::vector<ReachRow> rows;
  std::size_t violations = 0;
};

/// For every geodesic with |invariant| > eps, checks min R >= |invariant| - slack.
ReachReport meridian_reach_audit(const RevolutionSurface& surface, const std::vector<SampledCurve>& geodesics,
                                 double slack = 1e-6, double eps = 1e-9);

/// Canal surface: boundary of the union of balls B(x(t), r(t)) along a
/// segment, stored as a surface of revolution about AB in a local frame
/// with origin A and first axis along AB.
class CanalSurface final : public Surface {
 public:
  struct Knot {
    double t = 0.0;       // arc length along the segment
    double r = 0.0;       // distance to the surface
    double r_prime = 0.0; // dr/dt
    double X = 0.0;       // axial coordinate of the characteristic circle
    double rho = 0.0;     // its radius
  };

  CanalSurface(const Segment& segment, std::vector<Knot> knots);

  int dimension() const override { return local_->dimension(); }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "canal"; }
  bool in_domain(const Vec& p) const override;

  const std::vector<Knot>& knots() const { return knots_; }
  const RevolutionSurface& local() const { return *local_; }
  const Vec& origin() const { return origin_; }
  const Mat& basis() const { return basis_; }
  Vec to_local(const Vec& p) const { return basis_.transpose() * (p - origin_); }
  Vec to_world(const Vec& q) const { return origin_ + basis_ * q; }

  /// Point on the characteristic circle of knot k in the unit direction
  /// `radial` (orthogonal to AB).
  Vec circle_point(std::size_t k, const Vec& radial) const;

  /// Max over knots and `directions` radial directions per knot of
  /// | |p - c| - r | and | <p - c, u> + r r' |.
  std::pair<double, double> envelope_residuals(int directions = 8) const;

 private:
  Segment segment_;
  std::vector<Knot> knots_;
  Vec origin_;
  Mat basis_;
  std::shared_ptr<RevolutionSurface> local_;
  Box box_;
};

/// Samples the distance function at `nodes` + 1 points, requires a passing
/// contraction audit, and fits the profile through the characteristic
/// circles with exact slopes.
CanalSurface canal_from_segment(const Surface& surface, const Segment& segment, int nodes,
                                const ProjectionOptions& options = {});

struct TangencyReport {
  double max_angle = 0.0;
  std::vector<double> angles;  // NaN at skipped endpoint nodes
};

/// Angle between the normals of the surface and of the canal surface at
/// every interior node of the curve.
TangencyReport tangency_check(const Surface& surface, const CanalSurface& canal, const SampledCurve& curve);

}  // namespace shadowgeo
