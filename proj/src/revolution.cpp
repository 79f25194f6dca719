#include "shadowgeo/revolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "shadowgeo/io.hpp"

namespace shadowgeo {

// ------------------------------------------------------------ profiles

ConstantProfile::ConstantProfile(double c) : c_(c) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidInput, "constant profile: radius must be positive");
}

SphereCapProfile::SphereCapProfile(double rho) : rho_(rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidInput, "sphere-cap profile: radius must be positive");
}

double SphereCapProfile::radius(double x) const { return std::sqrt(std::max(0.0, rho_ * rho_ - x * x)); }

double SphereCapProfile::slope(double x) const {
  const double r = radius(x);
  return r > 0.0 ? -x / r : (x > 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity());
}

double ParabolicProfile::square_d2(double x) const {
  const double d = slope(x);
  return 2.0 * (d * d + radius(x) * 2.0 * c2_);
}

TableProfile::TableProfile(std::vector<double> x, std::vector<double> r) : spline_(std::move(x), std::move(r)) {}

TableProfile::TableProfile(std::vector<double> x, std::vector<double> r, std::vector<double> slopes)
    : spline_(std::move(x), std::move(r), std::move(slopes)) {}

double TableProfile::square_d2(double x) const {
  const double d = spline_.derivative(x);
  return 2.0 * (d * d + spline_.value(x) * spline_.second_derivative(x));
}

// ------------------------------------------------------------ surface

RevolutionSurface::RevolutionSurface(ProfilePtr profile, double lo, double hi, int dimension)
    : profile_(std::move(profile)), lo_(lo), hi_(hi), dimension_(dimension) {
  if (!profile_) throw Error(ErrorKind::InvalidInput, "revolution surface: missing profile");
  if (dimension < 3 || dimension > kMaxDimension)
    throw Error(ErrorKind::InvalidInput, "revolution surface: dimension must be in [3, 8]");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::InvalidInput, "revolution surface: interval must satisfy lo < hi");
  constexpr int kProbe = 256;
  double r_max = 0.0;
  for (int i = 0; i <= kProbe; ++i) {
    const double x = lo + (hi - lo) * i / kProbe;
    const double r = profile_->radius(x);
    if (!std::isfinite(r) || r < 0.0 || ((i > 0 && i < kProbe) && !(r > 0.0)))
      throw Error(ErrorKind::InvalidInput, "revolution surface: profile must be positive inside the interval");
    r_max = std::max(r_max, r);
  }
  box_.lo = Vec::Constant(dimension, -1.05 * r_max - 1e-9);
  box_.hi = Vec::Constant(dimension, 1.05 * r_max + 1e-9);
  box_.lo[0] = lo;
  box_.hi[0] = hi;
}

double RevolutionSurface::value(const Vec& p) const {
  require_dimension(p, dimension_, "point");
  return p.tail(dimension_ - 1).squaredNorm() - profile_->square(p[0]);
}

Vec RevolutionSurface::gradient(const Vec& p) const {
  require_dimension(p, dimension_, "point");
  Vec g = 2.0 * p;
  g[0] = -profile_->square_d1(p[0]);
  return g;
}

Mat RevolutionSurface::hessian(const Vec& p) const {
  require_dimension(p, dimension_, "point");
  Mat h = 2.0 * Mat::Identity(dimension_, dimension_);
  h(0, 0) = -profile_->square_d2(p[0]);
  return h;
}

bool RevolutionSurface::in_domain(const Vec& p) const {
  return p.size() == dimension_ && p.allFinite() && p[0] >= lo_ && p[0] <= hi_;
}

Vec RevolutionSurface::point(double x, const Vec& radial) const {
  require_dimension(radial, dimension_, "radial");
  Vec dir = radial;
  dir[0] = 0.0;
  if (!(dir.norm() > 0.0)) throw Error(ErrorKind::InvalidInput, "revolution point: radial direction is along the axis");
  Vec p = profile_->radius(x) * dir.normalized();
  p[0] = x;
  return p;
}

MeridianFrame meridian_at(const RevolutionSurface& surface, const Vec& p) {
  require_dimension(p, surface.dimension(), "point");
  const Vec y = p.tail(surface.dimension() - 1);
  const double rho = y.norm();
  if (!(rho > kAxisExclusion)) throw Error(ErrorKind::InvalidInput, "meridian_at: point lies on the axis");
  if (!surface.on_surface(p)) throw Error(ErrorKind::InvalidInput, "meridian_at: point is not on the surface");
  MeridianFrame frame;
  frame.point = p;
  frame.radial = Vec::Zero(p.size());
  frame.radial.tail(p.size() - 1) = y / rho;
  // Tangent of x -> (x, R(x) radial) with R' = (R^2)' / (2 R) and R = rho.
  frame.mer = frame.radial * surface.profile().square_d1(p[0]);
  frame.mer[0] = 2.0 * rho;
  frame.mer.normalize();
  return frame;
}

// ------------------------------------------------------------ Clairaut

ClairautTable clairaut_invariants(const RevolutionSurface& surface, const SampledCurve& curve) {
  const int n = surface.dimension();
  if (curve.dimension() != n) throw Error(ErrorKind::InvalidInput, "clairaut_invariants: dimension mismatch");
  const Vec axis = Vec::Unit(n, 0);

  ClairautTable table;
  table.length = curve.length();
  std::vector<Vec> trivectors;
  Vec reference;
  for (const auto& node : curve.nodes) {
    if (!node.d1) continue;
    const Vec& p = node.point;
    if (!surface.on_surface(p)) {
      std::ostringstream msg;
      msg << "clairaut_invariants: node at ell = " << format_number(node.ell) << " is not on the surface";
      throw Error(ErrorKind::InvalidInput, msg.str());
    }
    ClairautRow row;
    row.ell = node.ell;
    row.R = p.tail(n - 1).norm();
    if (!(row.R > kAxisExclusion)) {
      row.on_axis = true;
      ++table.on_axis_nodes;
      table.rows.push_back(row);
      continue;
    }
    const Frame frame = frame_at(surface, p);
    Vec v = project_tangential(frame, *node.d1);
    const double speed = v.norm();
    if (!(speed > 0.0)) throw Error(ErrorKind::InvalidInput, "clairaut_invariants: zero tangent");
    v /= speed;
    const MeridianFrame mf = meridian_at(surface, p);
    row.sin_theta = std::min(1.0, (v - v.dot(mf.mer) * mf.mer).norm());
    row.product = row.R * row.sin_theta;

    Vec tri = wedge3(p, v, axis);
    if (n == 3) {
      Eigen::Matrix3d m;
      m.col(0) = p;
      m.col(1) = v;
      m.col(2) = axis;
      row.wedge = m.determinant();
    } else {
      const double mag = wedge_norm3(p, v, axis);
      double sign = 1.0;
      if (reference.size() > 0 && tri.dot(reference) < 0.0) sign = -1.0;
      tri *= sign;
      row.wedge = sign * mag;
      if (mag > 1e-12) reference = tri;
    }
    trivectors.push_back(tri);
    table.rows.push_back(row);
  }

  std::size_t count = 0;
  for (const auto& row : table.rows) {
    if (row.on_axis) continue;
    table.product_mean += row.product;
    table.wedge_mean += row.wedge;
    ++count;
  }
  if (count == 0) return table;
  table.product_mean /= static_cast<double>(count);
  table.wedge_mean /= static_cast<double>(count);
  Vec tri_mean = Vec::Zero(trivectors.front().size());
  for (const auto& t : trivectors) tri_mean += t;
  tri_mean /= static_cast<double>(trivectors.size());
  for (const auto& row : table.rows) {
    if (row.on_axis) continue;
    table.product_drift = std::max(table.product_drift, std::abs(row.product - table.product_mean));
    table.wedge_drift = std::max(table.wedge_drift, std::abs(row.wedge - table.wedge_mean));
    table.form_gap = std::max(table.form_gap, std::abs(std::abs(row.wedge) - row.product));
  }
  for (const auto& t : trivectors) table.multivector_drift = std::max(table.multivector_drift, (t - tri_mean).norm());
  return table;
}

void write_csv(std::ostream& os, const ClairautTable& table) {
  os << "ell,R,sin_theta,product,wedge\n";
  for (const auto& row : table.rows) {
    os << format_number(row.ell) << ',' << format_number(row.R) << ',';
    if (!row.on_axis)
      os << format_number(row.sin_theta) << ',' << format_number(row.product) << ',' << format_number(row.wedge);
    else os << ",,";
    os << '\n';
  }
}

SampledCurve to_frame(const SampledCurve& curve, const Vec& origin, const Mat& basis) {
  SampledCurve out = curve;
  for (auto& node : out.nodes) {
    node.point = basis.transpose() * (node.point - origin);
    if (node.d1) node.d1 = Vec(basis.transpose() * *node.d1);
    if (node.d2) node.d2 = Vec(basis.transpose() * *node.d2);
  }
  return out;
}

Mat axis_basis(const Vec& axis) {
  const int n = static_cast<int>(axis.size());
  if (!(axis.norm() > 0.0)) throw Error(ErrorKind::InvalidInput, "axis_basis: zero axis");
  Eigen::HouseholderQR<Mat> qr(Mat(axis.normalized()));
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  if (q.col(0).dot(axis) < 0.0) q.col(0) *= -1.0;
  if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;
  return q;
}

ReachReport meridian_reach_audit(const RevolutionSurface& surface, const std::vector<SampledCurve>& geodesics,
                                 double slack, double eps) {
  ReachReport report;
  for (const auto& g : geodesics) {
    const auto table = clairaut_invariants(surface, g);
    ReachRow row;
    row.invariant = table.wedge_mean;
    row.min_R = std::numeric_limits<double>::infinity();
    for (const auto& node : g.nodes) row.min_R = std::min(row.min_R, node.point.tail(node.point.size() - 1).norm());
    row.violated = std::abs(row.invariant) > eps && row.min_R < std::abs(row.invariant) - slack;
    if (row.violated) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

// ------------------------------------------------------------ canal surface

namespace {

std::shared_ptr<RevolutionSurface> local_surface(const std::vector<CanalSurface::Knot>& knots, int dimension) {
  std::vector<double> x, r, d;
  for (const auto& k : knots) {
    x.push_back(k.X);
    r.push_back(k.rho);
    d.push_back(k.r_prime / std::sqrt(1.0 - k.r_prime * k.r_prime));
  }
  auto profile = std::make_shared<TableProfile>(std::move(x), std::move(r), std::move(d));
  return std::make_shared<RevolutionSurface>(profile, knots.front().X, knots.back().X, dimension);
}

}  // namespace

CanalSurface::CanalSurface(const Segment& segment, std::vector<Knot> knots)
    : segment_(segment), knots_(std::move(knots)) {
  if (segment.dimension() < 3) throw Error(ErrorKind::InvalidInput, "canal surface: dimension must be at least 3");
  if (knots_.size() < 5) throw Error(ErrorKind::InvalidInput, "canal surface: at least five knots are required");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i].X > knots_[i - 1].X))
      throw Error(ErrorKind::Precondition, "canal surface: characteristic circles are not ordered along the axis");
  for (const auto& k : knots_)
    if (!(std::abs(k.r_prime) < 1.0)) throw Error(ErrorKind::Precondition, "canal surface: |r'| must stay below 1");
  origin_ = segment.a();
  basis_ = axis_basis(segment.direction());
  local_ = local_surface(knots_, segment.dimension());
  double rho_max = 0.0;
  for (const auto& k : knots_) rho_max = std::max(rho_max, k.rho);
  const double half = segment.length() + rho_max;
  box_ = {origin_.array() - half, origin_.array() + half};
}

double CanalSurface::value(const Vec& p) const { return local_->value(to_local(p)); }

Vec CanalSurface::gradient(const Vec& p) const { return basis_ * local_->gradient(to_local(p)); }

Mat CanalSurface::hessian(const Vec& p) const {
  return basis_ * local_->hessian(to_local(p)) * basis_.transpose();
}

bool CanalSurface::in_domain(const Vec& p) const { return p.allFinite() && local_->in_domain(to_local(p)); }

Vec CanalSurface::circle_point(std::size_t k, const Vec& radial) const {
  const Vec u = segment_.direction();
  Vec e = radial - radial.dot(u) * u;
  if (!(e.norm() > 0.0)) throw Error(ErrorKind::InvalidInput, "circle_point: radial direction is along the axis");
  e.normalize();
  return origin_ + knots_.at(k).X * u + knots_[k].rho * e;
}

std::pair<double, double> CanalSurface::envelope_residuals(int directions) const {
  const Vec u = segment_.direction();
  double sphere = 0.0;
  double tangency = 0.0;
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    const Vec c = origin_ + knots_[k].t * u;
    for (int j = 0; j < directions; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / directions;
      const Vec radial = std::cos(phi) * basis_.col(1) + std::sin(phi) * basis_.col(2);
      const Vec p = circle_point(k, radial);
      sphere = std::max(sphere, std::abs((p - c).norm() - knots_[k].r));
      tangency = std::max(tangency, std::abs((p - c).dot(u) + knots_[k].r * knots_[k].r_prime));
    }
  }
  return {sphere, tangency};
}

CanalSurface canal_from_segment(const Surface& surface, const Segment& segment, int nodes,
                                const ProjectionOptions& options) {
  require_dimension(segment.a(), surface.dimension(), "canal_from_segment");
  if (nodes < 16) throw Error(ErrorKind::InvalidInput, "canal_from_segment: at least 16 intervals are required");
  const auto projections = project_samples(surface, segment, nodes + 1, options);
  const auto audit = contraction_audit(segment, projections);
  if (!audit.passed) throw Error(ErrorKind::Precondition, "canal_from_segment: contraction audit failed");

  const double length = segment.length();
  const Vec u = segment.direction();
  double r_max = 0.0;
  for (const auto& p : projections) r_max = std::max(r_max, p.distance);
  if (!(r_max > 1e-12 * (1.0 + length)))
    throw Error(ErrorKind::Precondition, "canal_from_segment: segment lies on the surface (r = 0)");

  std::vector<CanalSurface::Knot> knots(projections.size());
  for (std::size_t i = 0; i < projections.size(); ++i) {
    auto& k = knots[i];
    const auto& pr = projections[i];
    k.t = length * static_cast<double>(i) / static_cast<double>(nodes);
    const bool first = i == 0, last = i == projections.size() - 1;
    // Endpoints on the surface: r = 0 and r' comes from the surface normal there.
    if ((first || last) && surface.on_surface(pr.query)) {
      k.r = 0.0;
      k.r_prime = (first ? 1.0 : -1.0) * std::abs(u.dot(unit_normal(surface, pr.query)));
    } else {
      k.r = pr.distance;
      if (!(k.r > 1e-10 * length)) {
        const double s = static_cast<double>(i) / nodes;
        throw Error(ErrorKind::Precondition,
                    "canal_from_segment: segment touches the surface at s = " + format_number(s), s);
      }
      k.r_prime = (pr.query - pr.footpoint).dot(u) / k.r;
    }
    k.X = k.t - k.r * k.r_prime;
    k.rho = k.r * std::sqrt(std::max(0.0, 1.0 - k.r_prime * k.r_prime));
  }
  return CanalSurface(segment, std::move(knots));
}

TangencyReport tangency_check(const Surface& surface, const CanalSurface& canal, const SampledCurve& curve) {
  TangencyReport report;
  report.angles.assign(curve.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const Vec& p = curve.nodes[i].point;
    if (!surface.on_surface(p)) throw Error(ErrorKind::InvalidInput, "tangency_check: node is not on the surface");
    if (!(std::abs(canal.value(p)) <= 1e-6 * (1.0 + p.norm())))
      throw Error(ErrorKind::InvalidInput, "tangency_check: node is not on the canal surface");
    report.angles[i] = line_angle(surface.gradient(p), canal.gradient(p));
    report.max_angle = std::max(report.max_angle, report.angles[i]);
  }
  return report;
}

}  // namespace shadowgeo
