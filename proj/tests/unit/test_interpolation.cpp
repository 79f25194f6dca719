#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "shadowgeo/interpolation.hpp"

using namespace shadowgeo;

TEST_CASE("hermite spline reproduces cubics with exact slopes") {
  std::vector<double> x, y, d;
  for (int i = 0; i <= 6; ++i) {
    const double t = -1.0 + i / 3.0;
    x.push_back(t);
    y.push_back(t * t * t - t);
    d.push_back(3 * t * t - 1);
  }
  HermiteSpline s(x, y, d);
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    CHECK(s.value(t) == doctest::Approx(t * t * t - t).epsilon(1e-13).scale(1.0));
    CHECK(s.derivative(t) == doctest::Approx(3 * t * t - 1).epsilon(1e-12).scale(1.0));
    CHECK(s.second_derivative(t) == doctest::Approx(6 * t).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("monotone data gives a monotone interpolant and an exact inverse") {
  testgen::Rng g(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x{0.0}, y{0.0};
    for (int i = 1; i < 20; ++i) {
      x.push_back(x.back() + g.uniform(0.01, 1.0));
      // plateaus and jumps stress the limiter
      y.push_back(y.back() + (g.uniform() < 0.2 ? 0.0 : g.uniform(0.0, 3.0)));
    }
    HermiteSpline s(x, y);
    double prev = s.value(x.front());
    for (int k = 1; k <= 2000; ++k) {
      const double t = x.front() + (x.back() - x.front()) * k / 2000.0;
      const double v = s.value(t);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(s.value(x[i]) == doctest::Approx(y[i]));
  }
  std::vector<double> x{0, 1, 2, 3}, y{0, 1, 4, 9};
  HermiteSpline s(x, y);
  for (double v = 0.0; v <= 9.0; v += 0.25) CHECK(s.value(s.inverse(v)) == doctest::Approx(v).epsilon(1e-12));
}
