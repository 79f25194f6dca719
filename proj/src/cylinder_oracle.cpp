#include "shadowgeo/cylinder_oracle.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "shadowgeo/io.hpp"

namespace shadowgeo {

CylinderScenario CylinderScenario::make(double R, double h, double a, double b) {
  if (!std::isfinite(R) || !std::isfinite(h) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorKind::InvalidInput, "cylinder scenario: non-finite parameter");
  if (!(R > 0.0) || !(h > 0.0)) throw Error(ErrorKind::InvalidInput, "cylinder scenario: R and h must be positive");
  if (std::abs(a * a + b * b - R * R) > 1e-12 * std::max(1.0, R * R))
    throw Error(ErrorKind::InvalidInput, "cylinder scenario: (a, b) must satisfy a^2 + b^2 = R^2");
  CylinderScenario sc(R, h, a, b);
  // Distance from the axis to the line through (-R, 0) and (a, b), clamped
  // to the segment, is the minimum of the chord midpoint distance.
  const double mid = std::hypot(0.5 * (a - R), 0.5 * b);
  if (!(mid > 1e-9 * R)) throw Error(ErrorKind::InvalidInput, "cylinder scenario: antipodal endpoints meet the axis");
  return sc;
}

Vec CylinderScenario::X() const { return point_T(0.0); }
Vec CylinderScenario::Y() const { return point_T(h_); }

void CylinderScenario::require_height(double t) const {
  if (!(t >= 0.0 && t <= h_)) throw Error(ErrorKind::InvalidInput, "cylinder scenario: t outside [0, h]");
}

Vec CylinderScenario::point_T(double t) const {
  require_height(t);
  Vec p(3);
  if (t == h_) p << a_, b_, h_;
  else p << u(t), v(t), t;
  return p;
}

Vec CylinderScenario::point_Tprime(double t) const {
  require_height(t);
  const double rho = std::hypot(u(t), v(t));
  if (!(rho > 1e-9 * R_)) throw Error(ErrorKind::InvalidInput, "cylinder scenario: T lies on the axis");
  if (t == 0.0 || t == h_) return point_T(t);
  Vec p(3);
  p << R_ * u(t) / rho, R_ * v(t) / rho, t;
  return p;
}

double CylinderScenario::sin_alpha(double t) const {
  require_height(t);
  return u(t) / std::hypot(u(t), v(t));
}

double CylinderScenario::cos_alpha(double t) const {
  require_height(t);
  return v(t) / std::hypot(u(t), v(t));
}

double CylinderScenario::alpha(double t) const {
  require_height(t);
  return std::atan2(u(t), v(t));
}

double CylinderScenario::alpha_prime(double t) const {
  require_height(t);
  const double rho2 = u(t) * u(t) + v(t) * v(t);
  return (b_ * R_ / h_) / rho2;
}

bool CylinderScenario::is_trivial_geodesic_case() const {
  const double eps = 1e-12 * std::max(1.0, R_);
  return std::abs(a_ + R_) <= eps && std::abs(b_) <= eps;
}

std::vector<OracleRow> oracle_table(const CylinderScenario& sc, int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "oracle_table: at least two samples are required");
  std::vector<OracleRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = i == samples - 1 ? sc.h() : sc.h() * i / (samples - 1);
    rows.push_back({t, sc.point_T(t), sc.point_Tprime(t), sc.sin_alpha(t), sc.alpha_prime(t)});
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << "t,T_x,T_y,T_z,Tp_x,Tp_y,Tp_z,sin_alpha,alpha_prime\n";
  for (const auto& r : rows) {
    os << format_number(r.t);
    for (const auto* v : {&r.T, &r.Tprime})
      for (int k = 0; k < 3; ++k) os << ',' << format_number((*v)[k]);
    os << ',' << format_number(r.sin_alpha) << ',' << format_number(r.alpha_prime) << '\n';
  }
}

std::vector<double> node_angles(const SampledCurve& curve) {
  std::vector<double> out;
  out.reserve(curve.size());
  for (const auto& node : curve.nodes) {
    double angle = std::atan2(node.point[0], node.point[1]);
    if (!out.empty()) {
      while (angle - out.back() > std::numbers::pi) angle -= 2.0 * std::numbers::pi;
      while (angle - out.back() < -std::numbers::pi) angle += 2.0 * std::numbers::pi;
    }
    out.push_back(angle);
  }
  return out;
}

std::vector<double> angular_rate(const SampledCurve& curve) {
  const std::size_t count = curve.size();
  if (count < 5) throw Error(ErrorKind::InvalidInput, "angular_rate: at least five nodes are required");
  const auto a = node_angles(curve);
  const std::size_t n = count - 1;
  const double dt = (curve.nodes[n].point[2] - curve.nodes[0].point[2]) / static_cast<double>(n);
  if (!(std::abs(dt) > 0.0)) throw Error(ErrorKind::InvalidInput, "angular_rate: curve has no height range");
  std::vector<double> rate(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (i < 2) {
      const std::size_t j = i;  // forward stencils at offsets -j..4-j
      rate[i] = j == 0 ? (-25.0 * a[0] + 48.0 * a[1] - 36.0 * a[2] + 16.0 * a[3] - 3.0 * a[4]) / (12.0 * dt)
                       : (-3.0 * a[0] - 10.0 * a[1] + 18.0 * a[2] - 6.0 * a[3] + a[4]) / (12.0 * dt);
    } else if (i + 2 >= count) {
      const std::size_t m = n;
      rate[i] = i == n ? (25.0 * a[m] - 48.0 * a[m - 1] + 36.0 * a[m - 2] - 16.0 * a[m - 3] + 3.0 * a[m - 4]) / (12.0 * dt)
                       : (3.0 * a[m] + 10.0 * a[m - 1] - 18.0 * a[m - 2] + 6.0 * a[m - 3] - a[m - 4]) / (12.0 * dt);
    } else {
      rate[i] = (-a[i + 2] + 8.0 * a[i + 1] - 8.0 * a[i - 1] + a[i - 2]) / (12.0 * dt);
    }
  }
  return rate;
}

}  // namespace shadowgeo
