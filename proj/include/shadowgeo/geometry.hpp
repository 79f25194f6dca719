#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "shadowgeo/error.hpp"

namespace shadowgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 8;
inline constexpr double kDegenerateGradient = 1e-10;

/// Tolerance on |F(p)| for a point to count as lying on a surface.
inline double on_surface_tolerance(const Vec& p) { return 1e-9 * (1.0 + p.norm()); }

/// Axis-aligned box used for seeding and as the integration domain.
struct Box {
  Vec lo;
  Vec hi;

  bool contains(const Vec& p, double slack = 0.0) const;
  Vec center() const { return 0.5 * (lo + hi); }
  double diameter() const { return (hi - lo).norm(); }
};

/// An implicit hypersurface F(p) = 0 in R^n with first and second
/// derivatives. Implementations are immutable once constructed.
class Surface {
 public:
  virtual ~Surface() = default;

  virtual int dimension() const = 0;
  virtual double value(const Vec& p) const = 0;
  virtual Vec gradient(const Vec& p) const = 0;
  virtual Mat hessian(const Vec& p) const = 0;
  virtual Box bounds() const = 0;
  virtual std::string name() const = 0;

  /// Region in which geodesics may be integrated. Defaults to the bounding
  /// box with a small relative slack.
  virtual bool in_domain(const Vec& p) const;

  bool on_surface(const Vec& p) const;
};

using SurfacePtr = std::shared_ptr<const Surface>;

/// Orthonormal frame at a surface point: unit normal plus n-1 tangents
/// stored as the columns of `tangents`.
struct Frame {
  Vec point;
  Vec normal;
  Mat tangents;
};

void require_dimension(const Vec& v, int n, const char* what);
void require_finite(const Vec& v, const char* what);

/// Volume of the parallelepiped spanned by u, v, w (sqrt of the Gram
/// determinant). Computed from a Householder QR so that nearly dependent
/// triples keep full absolute accuracy.
double wedge_norm3(const Vec& u, const Vec& v, const Vec& w);

/// Components of u ^ v ^ w in the basis e_i ^ e_j ^ e_k, i < j < k, in
/// lexicographic order. Length C(n, 3).
Vec wedge3(const Vec& u, const Vec& v, const Vec& w);

Frame frame_at(const Surface& surface, const Vec& p);

/// Unit normal without the on-surface check.
Vec unit_normal(const Surface& surface, const Vec& p);

Vec project_tangential(const Frame& frame, const Vec& v);

/// Angle between two lines (orientation-insensitive), in [0, pi/2].
double line_angle(const Vec& u, const Vec& v);

/// Relative error between the supplied gradient and a central-difference
/// gradient of F at p.
double gradient_check(const Surface& surface, const Vec& p, double step = 1e-6);

/// max |H - H^T| / max(1, |H|) at p.
double hessian_asymmetry(const Surface& surface, const Vec& p);

}  // namespace shadowgeo
