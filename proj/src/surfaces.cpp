#include "shadowgeo/surfaces.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace shadowgeo {

namespace {

void check_dimension(int n, const char* what) {
  if (n < kMinDimension || n > kMaxDimension) {
    std::ostringstream msg;
    msg << what << ": dimension " << n << " outside supported range [" << kMinDimension << ", "
        << kMaxDimension << "]";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::InvalidInput, std::string(what) + " must be positive and finite");
}

Box checked_box(const std::optional<Box>& box, int n, Box fallback) {
  if (!box) return fallback;
  if (box->lo.size() != n || box->hi.size() != n)
    throw Error(ErrorKind::InvalidInput, "bounding box dimension mismatch");
  if ((box->hi.array() <= box->lo.array()).any())
    throw Error(ErrorKind::InvalidInput, "bounding box must have hi > lo in every coordinate");
  return *box;
}

}  // namespace

Box cube_box(int dimension, const Vec& center, double half_width) {
  Box box{center - Vec::Constant(dimension, half_width), center + Vec::Constant(dimension, half_width)};
  return box;
}

// ---------------------------------------------------------------- Sphere

Sphere::Sphere(double radius, Vec center, std::optional<Box> box)
    : radius_(radius), center_(std::move(center)) {
  check_dimension(static_cast<int>(center_.size()), "sphere");
  check_positive(radius_, "sphere radius");
  require_finite(center_, "sphere center");
  box_ = checked_box(box, dimension(), cube_box(dimension(), center_, 1.25 * radius_));
}

Sphere::Sphere(double radius, int dimension) : Sphere(radius, Vec::Zero(dimension)) {}

double Sphere::value(const Vec& p) const {
  return ((p - center_).squaredNorm() - radius_ * radius_) / (2.0 * radius_);
}

Vec Sphere::gradient(const Vec& p) const { return (p - center_) / radius_; }

Mat Sphere::hessian(const Vec&) const {
  return Mat::Identity(dimension(), dimension()) / radius_;
}

// -------------------------------------------------------------- Cylinder

Cylinder::Cylinder(double radius, Vec axis, std::optional<Box> box) : radius_(radius) {
  check_dimension(static_cast<int>(axis.size()), "cylinder");
  check_positive(radius_, "cylinder radius");
  const double len = axis.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw Error(ErrorKind::InvalidInput, "cylinder axis must be nonzero");
  axis_ = axis / len;
  box_ = checked_box(box, dimension(), cube_box(dimension(), Vec::Zero(dimension()), 4.0 * radius_));
}

double Cylinder::value(const Vec& p) const {
  const Vec perp = p - p.dot(axis_) * axis_;
  return (perp.squaredNorm() - radius_ * radius_) / (2.0 * radius_);
}

Vec Cylinder::gradient(const Vec& p) const { return (p - p.dot(axis_) * axis_) / radius_; }

Mat Cylinder::hessian(const Vec&) const {
  const int n = dimension();
  return (Mat::Identity(n, n) - axis_ * axis_.transpose()) / radius_;
}

// ------------------------------------------------------------- Ellipsoid

Ellipsoid::Ellipsoid(Vec semi_axes, std::optional<Box> box) : semi_axes_(std::move(semi_axes)) {
  check_dimension(static_cast<int>(semi_axes_.size()), "ellipsoid");
  for (Eigen::Index i = 0; i < semi_axes_.size(); ++i) check_positive(semi_axes_[i], "ellipsoid semi-axis");
  Box fallback{-1.25 * semi_axes_, 1.25 * semi_axes_};
  box_ = checked_box(box, dimension(), fallback);
}

double Ellipsoid::value(const Vec& p) const {
  return 0.5 * (p.array() / semi_axes_.array()).square().sum() - 0.5;
}

Vec Ellipsoid::gradient(const Vec& p) const {
  return (p.array() / semi_axes_.array().square()).matrix();
}

Mat Ellipsoid::hessian(const Vec&) const {
  return semi_axes_.array().square().inverse().matrix().asDiagonal();
}

// ----------------------------------------------------------------- Torus

Torus::Torus(double major, double minor, std::optional<Box> box) : major_(major), minor_(minor) {
  check_positive(major_, "torus major radius");
  check_positive(minor_, "torus minor radius");
  if (minor_ >= major_) throw Error(ErrorKind::InvalidInput, "torus requires minor < major radius");
  const double w = 1.25 * (major_ + minor_);
  Box fallback{Vec(3), Vec(3)};
  fallback.lo << -w, -w, -1.25 * minor_;
  fallback.hi << w, w, 1.25 * minor_;
  box_ = checked_box(box, 3, fallback);
}

double Torus::value(const Vec& p) const {
  const double s = p.squaredNorm() + major_ * major_ - minor_ * minor_;
  return s * s - 4.0 * major_ * major_ * (p[0] * p[0] + p[1] * p[1]);
}

Vec Torus::gradient(const Vec& p) const {
  const double s = p.squaredNorm() + major_ * major_ - minor_ * minor_;
  Vec g = 4.0 * s * p;
  g[0] -= 8.0 * major_ * major_ * p[0];
  g[1] -= 8.0 * major_ * major_ * p[1];
  return g;
}

Mat Torus::hessian(const Vec& p) const {
  const double s = p.squaredNorm() + major_ * major_ - minor_ * minor_;
  Mat h = 4.0 * s * Mat::Identity(3, 3) + 8.0 * p * p.transpose();
  h(0, 0) -= 8.0 * major_ * major_;
  h(1, 1) -= 8.0 * major_ * major_;
  return h;
}

// ----------------------------------------------------------------- Plane

Plane::Plane(Vec normal, double offset, std::optional<Box> box) : offset_(offset) {
  check_dimension(static_cast<int>(normal.size()), "plane");
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw Error(ErrorKind::InvalidInput, "plane normal must be nonzero");
  normal_ = normal / len;
  offset_ /= len;
  box_ = checked_box(box, dimension(), cube_box(dimension(), offset_ * normal_, 4.0));
}

Mat Plane::hessian(const Vec&) const { return Mat::Zero(dimension(), dimension()); }

// ----------------------------------------------------------------- Graph

namespace {

std::vector<std::string> graph_variables(int n) {
  std::vector<std::string> vars;
  for (int i = 1; i < n; ++i) vars.push_back("x" + std::to_string(i));
  if (n == 3) vars = {"x", "y"};
  return vars;
}

std::string alias_variables(const std::string& text, int n) {
  if (n == 3) return text;
  // Map bare x / y onto x1 / x2 for n != 3 by token substitution.
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool start = i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
    const bool end = i + 1 == text.size() ||
                     !(std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_');
    if (start && end && c == 'x') out += "x1";
    else if (start && end && c == 'y' && n > 2) out += "x2";
    else out += c;
  }
  return out;
}

}  // namespace

GraphSurface::GraphSurface(const std::string& expression, int dimension, std::optional<Box> domain)
    : dimension_(dimension),
      f_(Expression::parse(alias_variables(expression, dimension), graph_variables(dimension))) {
  check_dimension(dimension_, "graph");
  const int m = dimension_ - 1;
  for (int i = 0; i < m; ++i) df_.push_back(f_.derivative(i));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d2f_.push_back(df_[i].derivative(j));

  Vec lo = Vec::Constant(m, -2.0);
  Vec hi = Vec::Constant(m, 2.0);
  if (domain) {
    if (domain->lo.size() == dimension_) {
      box_ = checked_box(domain, dimension_, Box{});
      return;
    }
    if (domain->lo.size() != m || domain->hi.size() != m)
      throw Error(ErrorKind::InvalidInput, "graph domain must have n-1 or n coordinates");
    lo = domain->lo;
    hi = domain->hi;
  }
  // Height range from a lattice with at most ~4096 points.
  int per_axis = 2;
  while (std::pow(per_axis + 1, m) <= 4096.0 && per_axis < 64) ++per_axis;
  double zmin = std::numeric_limits<double>::infinity();
  double zmax = -zmin;
  std::vector<int> idx(m, 0);
  Vec base(m);
  for (;;) {
    for (int i = 0; i < m; ++i) base[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
    const double z = height(base);
    if (std::isfinite(z)) {
      zmin = std::min(zmin, z);
      zmax = std::max(zmax, z);
    }
    int k = 0;
    while (k < m && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == m) break;
  }
  if (!std::isfinite(zmin)) throw Error(ErrorKind::InvalidInput, "graph expression is not finite on its domain");
  const double pad = 0.25 * (zmax - zmin) + 0.5;
  box_.lo.resize(dimension_);
  box_.hi.resize(dimension_);
  box_.lo << lo, zmin - pad;
  box_.hi << hi, zmax + pad;
}

double GraphSurface::height(const Vec& base) const {
  return f_.evaluate(std::span<const double>(base.data(), static_cast<std::size_t>(base.size())));
}

double GraphSurface::value(const Vec& p) const {
  return height(p.head(dimension_ - 1)) - p[dimension_ - 1];
}

Vec GraphSurface::gradient(const Vec& p) const {
  const int m = dimension_ - 1;
  const std::span<const double> x(p.data(), static_cast<std::size_t>(m));
  Vec g(dimension_);
  for (int i = 0; i < m; ++i) g[i] = df_[i].evaluate(x);
  g[m] = -1.0;
  return g;
}

Mat GraphSurface::hessian(const Vec& p) const {
  const int m = dimension_ - 1;
  const std::span<const double> x(p.data(), static_cast<std::size_t>(m));
  Mat h = Mat::Zero(dimension_, dimension_);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = d2f_[i * m + j].evaluate(x);
  return 0.5 * (h + h.transpose());
}

// -------------------------------------------------------------- Function

FunctionSurface::FunctionSurface(int dimension, ValueFn value, Box box, GradientFn gradient,
                                 HessianFn hessian, std::string name)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      name_(std::move(name)) {
  check_dimension(dimension_, "function surface");
  if (!value_) throw Error(ErrorKind::InvalidInput, "function surface needs a value callback");
  box_ = checked_box(box, dimension_, Box{});
}

Vec FunctionSurface::gradient(const Vec& p) const {
  if (gradient_) return gradient_(p);
  Vec g(dimension_);
  for (int i = 0; i < dimension_; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(p[i]));
    Vec plus = p;
    Vec minus = p;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (value_(plus) - value_(minus)) / (2.0 * h);
  }
  return g;
}

Mat FunctionSurface::hessian(const Vec& p) const {
  if (hessian_) return hessian_(p);
  Mat h(dimension_, dimension_);
  if (gradient_) {
    for (int i = 0; i < dimension_; ++i) {
      const double step = 1e-6 * (1.0 + std::abs(p[i]));
      Vec plus = p;
      Vec minus = p;
      plus[i] += step;
      minus[i] -= step;
      h.col(i) = (gradient_(plus) - gradient_(minus)) / (2.0 * step);
    }
  } else {
    const double f0 = value_(p);
    for (int i = 0; i < dimension_; ++i) {
      const double hi = 1e-4 * (1.0 + std::abs(p[i]));
      for (int j = i; j < dimension_; ++j) {
        const double hj = 1e-4 * (1.0 + std::abs(p[j]));
        if (i == j) {
          Vec plus = p;
          Vec minus = p;
          plus[i] += hi;
          minus[i] -= hi;
          h(i, i) = (value_(plus) - 2.0 * f0 + value_(minus)) / (hi * hi);
        } else {
          Vec pp = p, pm = p, mp = p, mm = p;
          pp[i] += hi; pp[j] += hj;
          pm[i] += hi; pm[j] -= hj;
          mp[i] -= hi; mp[j] += hj;
          mm[i] -= hi; mm[j] -= hj;
          h(i, j) = (value_(pp) - value_(pm) - value_(mp) + value_(mm)) / (4.0 * hi * hj);
          h(j, i) = h(i, j);
        }
      }
    }
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace shadowgeo
