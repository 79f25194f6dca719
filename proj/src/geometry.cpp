#include "shadowgeo/geometry.hpp"

#include <cmath>
#include <sstream>

namespace shadowgeo {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateSurface: return "degenerate-surface";
    case ErrorKind::OffSurface: return "off-surface";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DomainExit: return "domain-exit";
  }
  return "unknown";
}

bool Box::contains(const Vec& p, double slack) const {
  if (p.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pad = slack * (1.0 + hi[i] - lo[i]);
    if (p[i] < lo[i] - pad || p[i] > hi[i] + pad) return false;
  }
  return true;
}

bool Surface::in_domain(const Vec& p) const { return bounds().contains(p, 1e-6); }

bool Surface::on_surface(const Vec& p) const {
  return std::abs(value(p)) <= on_surface_tolerance(p);
}

void require_dimension(const Vec& v, int n, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << n << ", got " << v.size();
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entry");
}

double wedge_norm3(const Vec& u, const Vec& v, const Vec& w) {
  const auto n = u.size();
  if (v.size() != n || w.size() != n)
    throw Error(ErrorKind::InvalidInput, "wedge_norm3: dimension mismatch");
  if (n < 3) throw Error(ErrorKind::InvalidInput, "wedge_norm3: dimension must be at least 3");
  Mat a(n, 3);
  a.col(0) = u;
  a.col(1) = v;
  a.col(2) = w;
  const Eigen::HouseholderQR<Mat> qr(a);
  const Mat& r = qr.matrixQR();
  return std::abs(r(0, 0) * r(1, 1) * r(2, 2));
}

Vec wedge3(const Vec& u, const Vec& v, const Vec& w) {
  const auto n = u.size();
  if (v.size() != n || w.size() != n)
    throw Error(ErrorKind::InvalidInput, "wedge3: dimension mismatch");
  if (n < 3) throw Error(ErrorKind::InvalidInput, "wedge3: dimension must be at least 3");
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        Eigen::Matrix3d m;
        m << u[i], v[i], w[i], u[j], v[j], w[j], u[k], v[k], w[k];
        out.push_back(m.determinant());
      }
  return Eigen::Map<Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Vec unit_normal(const Surface& surface, const Vec& p) {
  const Vec g = surface.gradient(p);
  const double norm = g.norm();
  if (!(norm >= kDegenerateGradient))
    throw Error(ErrorKind::DegenerateSurface, "gradient vanishes at query point");
  return g / norm;
}

Frame frame_at(const Surface& surface, const Vec& p) {
  require_dimension(p, surface.dimension(), "frame_at");
  if (!surface.on_surface(p)) {
    std::ostringstream msg;
    msg << "frame_at: point off surface, |F| = " << std::abs(surface.value(p));
    throw Error(ErrorKind::OffSurface, msg.str());
  }
  Frame frame;
  frame.point = p;
  frame.normal = unit_normal(surface, p);
  const auto n = p.size();
  // Q of a Householder QR of the normal has the normal (up to sign) as its
  // first column and an orthonormal complement after it.
  const Eigen::HouseholderQR<Mat> qr(frame.normal);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  frame.tangents = q.rightCols(n - 1);
  return frame;
}

Vec project_tangential(const Frame& frame, const Vec& v) {
  require_dimension(v, static_cast<int>(frame.normal.size()), "project_tangential");
  return v - v.dot(frame.normal) * frame.normal;
}

double line_angle(const Vec& u, const Vec& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorKind::InvalidInput, "line_angle: zero vector");
  const Vec a = u / nu;
  const Vec b = v / nv;
  // atan2 keeps full relative accuracy for tiny angles, unlike acos.
  const double c = std::abs(a.dot(b));
  const double s = (a - a.dot(b) * b).norm();
  return std::atan2(s, c);
}

double gradient_check(const Surface& surface, const Vec& p, double step) {
  const Vec g = surface.gradient(p);
  Vec fd(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = step * (1.0 + std::abs(p[i]));
    Vec plus = p;
    Vec minus = p;
    plus[i] += h;
    minus[i] -= h;
    fd[i] = (surface.value(plus) - surface.value(minus)) / (2.0 * h);
  }
  return (g - fd).norm() / std::max(1.0, g.norm());
}

double hessian_asymmetry(const Surface& surface, const Vec& p) {
  const Mat h = surface.hessian(p);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace shadowgeo
