#pragma once

#include <vector>

namespace shadowgeo {

/// Piecewise cubic Hermite interpolant on strictly increasing knots.
///
/// Slopes are either supplied or computed with the Fritsch-Carlson monotone
/// rule (PCHIP), in which case monotone data gives a monotone interpolant.
/// Outside the knot range the end pieces are continued linearly.
class HermiteSpline {
 public:
  HermiteSpline() = default;
  HermiteSpline(std::vector<double> x, std::vector<double> y);
  HermiteSpline(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

  double operator()(double t) const { return value(t); }
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// Solves value(t) = target for increasing data; bisection-safeguarded
  /// Newton inside the bracketing piece.
  double inverse(double target) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }

 private:
  std::size_t piece(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace shadowgeo
