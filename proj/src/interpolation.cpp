#include "shadowgeo/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "shadowgeo/error.hpp"

namespace shadowgeo {

namespace {

void check_knots(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size())
    throw Error(ErrorKind::InvalidInput, "spline needs at least two knots with matching values");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw Error(ErrorKind::InvalidInput, "spline knots must be strictly increasing");
}

}  // namespace

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland form used by PCHIP).
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) s = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

HermiteSpline::HermiteSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_knots(x_, y_);
  d_ = pchip_slopes(x_, y_);
}

HermiteSpline::HermiteSpline(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  check_knots(x_, y_);
  if (d_.size() != x_.size()) throw Error(ErrorKind::InvalidInput, "spline slope count mismatch");
}

std::size_t HermiteSpline::piece(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double HermiteSpline::value(double t) const {
  if (t < x_.front()) return y_.front() + d_.front() * (t - x_.front());
  if (t > x_.back()) return y_.back() + d_.back() * (t - x_.back());
  const std::size_t i = piece(t);
  const double h = x_[i + 1] - x_[i];
  const double u = (t - x_[i]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * h * d_[i] +
         (-2 * u3 + 3 * u2) * y_[i + 1] + (u3 - u2) * h * d_[i + 1];
}

double HermiteSpline::derivative(double t) const {
  if (t < x_.front()) return d_.front();
  if (t > x_.back()) return d_.back();
  const std::size_t i = piece(t);
  const double h = x_[i + 1] - x_[i];
  const double u = (t - x_[i]) / h;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y_[i] + (-6 * u2 + 6 * u) * y_[i + 1]) / h +
         (3 * u2 - 4 * u + 1) * d_[i] + (3 * u2 - 2 * u) * d_[i + 1];
}

double HermiteSpline::second_derivative(double t) const {
  if (t < x_.front() || t > x_.back()) return 0.0;
  const std::size_t i = piece(t);
  const double h = x_[i + 1] - x_[i];
  const double u = (t - x_[i]) / h;
  return ((12 * u - 6) * y_[i] + (-12 * u + 6) * y_[i + 1]) / (h * h) +
         ((6 * u - 4) * d_[i] + (6 * u - 2) * d_[i + 1]) / h;
}

double HermiteSpline::inverse(double target) const {
  if (target <= y_.front()) {
    return d_.front() > 0.0 ? x_.front() + (target - y_.front()) / d_.front() : x_.front();
  }
  if (target >= y_.back()) {
    return d_.back() > 0.0 ? x_.back() + (target - y_.back()) / d_.back() : x_.back();
  }
  const auto it = std::upper_bound(y_.begin(), y_.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - y_.begin()) - 1;
  double lo = x_[i];
  double hi = x_[i + 1];
  double t = lo + (hi - lo) * (target - y_[i]) / (y_[i + 1] - y_[i]);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = value(t) - target;
    if (f == 0.0) break;
    if (f > 0.0) hi = t;
    else lo = t;
    const double slope = derivative(t);
    double next = slope > 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-16 * (1.0 + std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace shadowgeo
