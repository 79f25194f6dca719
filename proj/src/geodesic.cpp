#include "shadowgeo/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "shadowgeo/io.hpp"
#include "shadowgeo/parallel.hpp"

namespace shadowgeo {

Verdict band(double value, double tol) {
  if (value <= tol) return Verdict::Positive;
  if (value >= 10.0 * tol) return Verdict::Negative;
  return Verdict::Inconclusive;
}

const char* geodesic_label(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "geodesic";
    case Verdict::Negative: return "not-geodesic";
    default: return "inconclusive";
  }
}

const char* coplanar_label(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "coplanar";
    case Verdict::Negative: return "not-coplanar";
    default: return "inconclusive";
  }
}

GeodesicReport geodesic_defect(const Surface& surface, const SampledCurve& curve, double tol,
                               const std::vector<bool>* exclude) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "geodesic_defect: tolerance must be positive");
  if (!curve.has_derivatives()) throw Error(ErrorKind::InvalidInput, "geodesic_defect: derivatives not filled");
  if (exclude && exclude->size() != curve.size())
    throw Error(ErrorKind::InvalidInput, "geodesic_defect: exclusion mask size mismatch");

  GeodesicReport report;
  report.tolerance = tol;
  report.node_defects.assign(curve.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(curve.size(), resolve_threads(0), [&](std::size_t i) {
    const auto& node = curve.nodes[i];
    if (!node.d2 || (exclude && (*exclude)[i])) return;
    const Frame frame = frame_at(surface, node.point);
    report.node_defects[i] = project_tangential(frame, *node.d2).norm();
  });
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (exclude && (*exclude)[i] && curve.nodes[i].d2) ++report.excluded_nodes;
    if (!std::isnan(report.node_defects[i])) report.defect = std::max(report.defect, report.node_defects[i]);
  }
  report.speed_dev = speed_constancy_check(curve);
  report.verdict = band(report.defect, tol);
  return report;
}

void write_csv(std::ostream& os, const SampledCurve& curve, const GeodesicReport& report) {
  os << "s,ell,defect\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    os << format_number(curve.nodes[i].s) << ',' << format_number(curve.nodes[i].ell) << ',';
    if (i < report.node_defects.size() && !std::isnan(report.node_defects[i]))
      os << format_number(report.node_defects[i]);
    os << '\n';
  }
}

namespace {

Vec orthogonal_unit(const Mat& basis, int n) {
  // Any unit vector orthogonal to the columns of basis.
  Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.col(basis.cols());
}

}  // namespace

CoplanarityReport coplanarity(const Segment& segment, const SampledCurve& curve) {
  if (curve.size() == 0) throw Error(ErrorKind::InvalidInput, "coplanarity: empty curve");
  const int n = segment.dimension();
  if (curve.dimension() != n) throw Error(ErrorKind::InvalidInput, "coplanarity: dimension mismatch");

  CoplanarityReport report;
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (std::size_t j = i + 1; j < curve.size(); ++j)
      report.diameter = std::max(report.diameter, (curve.nodes[i].point - curve.nodes[j].point).norm());
  if (report.diameter < 1e-12) throw Error(ErrorKind::InvalidInput, "coplanarity: degenerate curve");

  const Vec u = segment.direction();
  Mat offsets(static_cast<Eigen::Index>(curve.size()), n);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec d = curve.nodes[i].point - segment.a();
    offsets.row(static_cast<Eigen::Index>(i)) = (d - d.dot(u) * u).transpose();
  }

  Eigen::JacobiSVD<Mat> svd(offsets, Eigen::ComputeThinV);
  Vec w = svd.singularValues()(0) > 0.0 ? Vec(svd.matrixV().col(0)) : Vec();
  w = w.size() == n ? Vec(w - w.dot(u) * u) : Vec::Zero(n);
  if (w.norm() < 0.5) {
    Mat basis(n, 1);
    basis.col(0) = u;
    w = orthogonal_unit(basis, n);
  }
  w.normalize();
  report.in_plane = w;

  Eigen::Index worst = 0;
  for (Eigen::Index i = 0; i < offsets.rows(); ++i) {
    const Vec d = offsets.row(i).transpose();
    const double dist = (d - d.dot(w) * w).norm();
    if (dist > report.max_distance) {
      report.max_distance = dist;
      worst = i;
    }
  }
  report.residual = report.max_distance / report.diameter;

  Mat basis(n, 2);
  basis.col(0) = u;
  basis.col(1) = w;
  Vec normal;
  if (n == 3) {
    normal = Eigen::Vector3d(u).cross(Eigen::Vector3d(w));
  } else if (report.max_distance > 1e-12 * report.diameter) {
    const Vec d = offsets.row(worst).transpose();
    normal = d - d.dot(w) * w;
    normal -= normal.dot(u) * u;
  } else {
    normal = orthogonal_unit(basis, n);
  }
  report.normal = normal.normalized();
  return report;
}

// ------------------------------------------------------------ integrator

namespace {

Vec acceleration(const Surface& surface, const Vec& p, const Vec& v) {
  const Vec g = surface.gradient(p);
  const double g2 = g.squaredNorm();
  if (!(std::sqrt(g2) > kDegenerateGradient))
    throw Error(ErrorKind::DegenerateSurface, "integrate_geodesic: degenerate gradient");
  return -(v.dot(surface.hessian(p) * v) / g2) * g;
}

Vec return_to_surface(const Surface& surface, Vec p) {
  for (int k = 0; k < 8; ++k) {
    const double f = surface.value(p);
    if (std::abs(f) <= 1e-15 * (1.0 + p.norm())) break;
    const Vec g = surface.gradient(p);
    const double g2 = g.squaredNorm();
    if (!(std::sqrt(g2) > kDegenerateGradient))
      throw Error(ErrorKind::DegenerateSurface, "integrate_geodesic: degenerate gradient");
    p -= (f / g2) * g;
  }
  return p;
}

}  // namespace

SampledCurve integrate_geodesic(const Surface& surface, const Vec& p0, const Vec& v0, double length,
                                double step) {
  const int n = surface.dimension();
  require_dimension(p0, n, "p0");
  require_dimension(v0, n, "v0");
  if (!(length > 0.0) || !(step > 0.0) || !std::isfinite(length))
    throw Error(ErrorKind::InvalidInput, "integrate_geodesic: length and step must be positive");
  if (!surface.on_surface(p0)) throw Error(ErrorKind::OffSurface, "integrate_geodesic: p0 is not on the surface");
  const Vec n0 = unit_normal(surface, p0);
  if (std::abs(v0.norm() - 1.0) > 1e-8 || std::abs(v0.dot(n0)) > 1e-8)
    throw Error(ErrorKind::InvalidInput, "integrate_geodesic: v0 must be a unit tangent vector");

  const auto steps = static_cast<long>(std::ceil(length / step - 1e-12));
  const double h = length / static_cast<double>(steps);

  SampledCurve curve;
  curve.nodes.reserve(static_cast<std::size_t>(steps) + 1);
  Vec p = p0;
  Vec v = v0;
  auto push = [&](long k) {
    CurveNode node;
    node.point = p;
    node.ell = static_cast<double>(k) * h;
    node.s = node.ell / length;
    node.d1 = v;
    node.d2 = acceleration(surface, p, v);
    curve.nodes.push_back(std::move(node));
  };
  push(0);
  for (long k = 1; k <= steps; ++k) {
    const Vec k1p = v;
    const Vec k1v = acceleration(surface, p, v);
    const Vec k2p = v + 0.5 * h * k1v;
    const Vec k2v = acceleration(surface, p + 0.5 * h * k1p, k2p);
    const Vec k3p = v + 0.5 * h * k2v;
    const Vec k3v = acceleration(surface, p + 0.5 * h * k2p, k3p);
    const Vec k4p = v + h * k3v;
    const Vec k4v = acceleration(surface, p + h * k3p, k4p);
    p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

    p = return_to_surface(surface, p);
    if (!p.allFinite() || !surface.in_domain(p)) {
      std::ostringstream msg;
      msg << "integrate_geodesic: left the surface domain at length " << format_number(k * h);
      throw Error(ErrorKind::DomainExit, msg.str(), k * h);
    }
    const Vec normal = unit_normal(surface, p);
    v -= v.dot(normal) * normal;
    v.normalize();
    push(k);
  }
  return curve;
}

// ------------------------------------------------------------ audit

Theorem1Report theorem1_audit(const Surface& surface, const Segment& segment, const AuditOptions& options) {
  if (!(options.tol > 0.0) || !(options.planar_tol > 0.0))
    throw Error(ErrorKind::InvalidInput, "theorem1_audit: tolerances must be positive");
  ShadowOptions shadow_options = options.shadow;
  shadow_options.nodes = options.nodes;
  return theorem1_audit(surface, segment, build_shadow(surface, segment, shadow_options), options);
}

Theorem1Report theorem1_audit(const Surface& surface, const Segment& segment, ShadowCurve shadow,
                              const AuditOptions& options) {
  if (!(options.tol > 0.0) || !(options.planar_tol > 0.0))
    throw Error(ErrorKind::InvalidInput, "theorem1_audit: tolerances must be positive");
  Theorem1Report report;
  report.tol = options.tol;
  report.planar_tol = options.planar_tol;
  report.shadow = std::move(shadow);
  report.shadow.curve = derivatives(std::move(report.shadow.curve));
  const SampledCurve& curve = report.shadow.curve;

  report.coplanarity = coplanarity(segment, curve);
  const double cutoff = options.exclusion_ratio * report.coplanarity.diameter;
  std::vector<bool> exclude(curve.size(), false);
  bool any_kept = false;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const auto& node = curve.nodes[i];
    exclude[i] = (segment.at(node.s) - node.point).norm() < cutoff;
    any_kept = any_kept || !exclude[i];
  }
  // A segment lying on the surface has r = 0 everywhere; nothing to exclude.
  if (!any_kept) std::fill(exclude.begin(), exclude.end(), false);

  report.geodesic = geodesic_defect(surface, curve, options.tol, &exclude);
  const double spacing = curve.length() / static_cast<double>(curve.size() - 1);
  double spread = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    spread = std::max(spread, std::abs(curve.nodes[i + 1].ell - curve.nodes[i].ell - spacing));
  report.shadow.chord_spread = spread;
  report.resolved = spread <= 0.1 * options.tol * spacing * spacing;
  if (!report.resolved) report.geodesic.verdict = Verdict::Inconclusive;
  report.planar_verdict = band(report.coplanarity.residual, options.planar_tol);
  report.consistent = (report.geodesic.defect <= options.tol) == (report.coplanarity.residual <= options.planar_tol);
  report.definitive =
      report.geodesic.verdict != Verdict::Inconclusive && report.planar_verdict != Verdict::Inconclusive;
  return report;
}

}  // namespace shadowgeo
