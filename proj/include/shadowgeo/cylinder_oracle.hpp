#pragma once

#include <iosfwd>
#include <vector>

#include "shadowgeo/geometry.hpp"
#include "shadowgeo/shadow_curve.hpp"

namespace shadowgeo {

/// Vertical cylinder x^2 + y^2 = R^2 with lower point X = (-R, 0, 0) and
/// upper point Y = (a, b, h) on the rim z = h. T(t) is the point of the
/// segment XY at height t and T'(t) its radial projection onto the cylinder.
class CylinderScenario {
 public:
  /// Throws InvalidInput unless R, h > 0, a^2 + b^2 = R^2 within 1e-12
  /// (relative to R^2), and the segment stays off the axis.
  static CylinderScenario make(double R, double h, double a, double b);

  double R() const { return R_; }
  double h() const { return h_; }
  double a() const { return a_; }
  double b() const { return b_; }

  Vec X() const;
  Vec Y() const;

  Vec point_T(double t) const;
  Vec point_Tprime(double t) const;
  double sin_alpha(double t) const;
  double cos_alpha(double t) const;
  /// atan2(sin, cos); continuous in t since T never crosses the axis.
  double alpha(double t) const;
  double alpha_prime(double t) const;
  bool is_trivial_geodesic_case() const;

 private:
  CylinderScenario(double R, double h, double a, double b) : R_(R), h_(h), a_(a), b_(b) {}
  void require_height(double t) const;
  double u(double t) const { return -R_ + (a_ + R_) * t / h_; }
  double v(double t) const { return b_ * t / h_; }

  double R_, h_, a_, b_;
};

struct OracleRow {
  double t = 0.0;
  Vec T;
  Vec Tprime;
  double sin_alpha = 0.0;
  double alpha_prime = 0.0;
};

/// Rows at t = i h / (samples - 1).
std::vector<OracleRow> oracle_table(const CylinderScenario& sc, int samples);
void write_csv(std::ostream& os, const std::vector<OracleRow>& rows);

/// Unwrapped polar angle atan2(x, y) of every node; this is the oracle's
/// alpha for curves on the vertical cylinder.
std::vector<double> node_angles(const SampledCurve& curve);

/// d(alpha)/dt at the nodes of a curve whose nodes sit at uniformly spaced
/// heights (fourth order in the interior, one-sided fourth order at the
/// ends).
std::vector<double> angular_rate(const SampledCurve& curve);

}  // namespace shadowgeo
