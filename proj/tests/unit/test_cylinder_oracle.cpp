#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "shadowgeo/cylinder_oracle.hpp"
#include "shadowgeo/error.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/surfaces.hpp"

using namespace shadowgeo;
using testgen::Rng;

namespace {
Vec v3(double x, double y, double z) { return Vec{{x, y, z}}; }

CylinderScenario random_scenario(Rng& g) {
  const double R = g.uniform(0.5, 2.0), h = g.uniform(0.5, 3.0);
  // keep away from the antipodal configuration
  const double phi = g.uniform(-0.9, 0.9) * std::numbers::pi;
  return CylinderScenario::make(R, h, -R * std::cos(phi), R * std::sin(phi));
}
}  // namespace

TEST_CASE("segment and footpoint formulas") {
  const auto sc = CylinderScenario::make(1, 1, 0, 1);
  CHECK((sc.point_T(0) - v3(-1, 0, 0)).norm() == 0.0);
  CHECK((sc.point_T(1) - v3(0, 1, 1)).norm() == 0.0);
  CHECK((sc.point_T(0.5) - v3(-0.5, 0.5, 0.5)).norm() < 1e-15);
  const double c = std::sqrt(0.5);
  CHECK((sc.point_Tprime(0) - v3(-1, 0, 0)).norm() < 1e-15);
  CHECK((sc.point_Tprime(0.5) - v3(-c, c, 0.5)).norm() < 1e-15);
  CHECK((sc.point_Tprime(1) - v3(0, 1, 1)).norm() < 1e-15);
  CHECK_THROWS_AS(sc.point_T(1.5), Error);
  CHECK_THROWS_AS(sc.point_Tprime(-0.1), Error);
}

TEST_CASE("angle derivative reference values") {
  const auto sc = CylinderScenario::make(1, 1, 0, 1);
  CHECK(sc.alpha_prime(0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sc.alpha_prime(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto trivial = CylinderScenario::make(1, 1, -1, 0);
  for (double t = 0; t <= 1.0; t += 0.125) CHECK(trivial.alpha_prime(t) == 0.0);
}

TEST_CASE("triviality flag") {
  CHECK(CylinderScenario::make(1, 1, -1, 0).is_trivial_geodesic_case());
  CHECK(!CylinderScenario::make(1, 1, 0, 1).is_trivial_geodesic_case());
  CHECK(CylinderScenario::make(1, 1, -1 + 1e-15, 0).is_trivial_geodesic_case());
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(CylinderScenario::make(1, 1, 0.5, 0.5), Error);
  CHECK_THROWS_AS(CylinderScenario::make(1, 1, 1, 0), Error);  // antipodal: the segment meets the axis
  CHECK_THROWS_AS(CylinderScenario::make(-1, 1, 0, 1), Error);
  CHECK_THROWS_AS(CylinderScenario::make(1, 0, 0, 1), Error);
  CHECK_NOTHROW(CylinderScenario::make(2, 1, 0, -2));
}

TEST_CASE("the sine formula differentiates to cos(alpha) alpha'") {
  Rng g(71);
  for (int k = 0; k < 50; ++k) {
    const auto sc = random_scenario(g);
    const double h = sc.h(), step = 1e-5 * h;
    for (int i = 1; i < 40; ++i) {
      const double t = h * i / 40;
      const double ds = (sc.sin_alpha(t + step) - sc.sin_alpha(t - step)) / (2 * step);
      CHECK(ds == doctest::Approx(sc.cos_alpha(t) * sc.alpha_prime(t)).epsilon(1e-8).scale(1.0));
      const double da = (sc.alpha(t + step) - sc.alpha(t - step)) / (2 * step);
      CHECK(da == doctest::Approx(sc.alpha_prime(t)).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("closest_point of T is T'") {
  Rng g(72);
  for (int k = 0; k < 20; ++k) {
    const auto sc = random_scenario(g);
    Cylinder cyl(sc.R(), v3(0, 0, 1));
    for (int i = 0; i <= 32; ++i) {
      const double t = sc.h() * i / 32;
      CHECK((closest_point(cyl, sc.point_T(t)).footpoint - sc.point_Tprime(t)).norm() < 1e-9);
    }
  }
}

TEST_CASE("alpha' is constant exactly in the trivial case") {
  Rng g(73);
  for (int k = 0; k < 100; ++k) {
    const bool trivial = k % 5 == 0;
    const double R = g.uniform(0.5, 2);
    const auto sc = trivial ? CylinderScenario::make(R, g.uniform(0.5, 2), -R, 0) : random_scenario(g);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= 200; ++i) {
      const double a = sc.alpha_prime(std::min(sc.h(), sc.h() * i / 200));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    CHECK((hi - lo < 1e-10) == sc.is_trivial_geodesic_case());
  }
}

TEST_CASE("oracle table CSV") {
  const auto sc = CylinderScenario::make(1, 1, 0, 1);
  const auto rows = oracle_table(sc, 5);
  REQUIRE(rows.size() == 5);
  CHECK(rows[2].t == 0.5);
  CHECK(rows[2].alpha_prime == doctest::Approx(2.0));
  std::ostringstream os;
  write_csv(os, rows);
  CHECK(os.str().rfind("t,T_x,T_y,T_z,Tp_x,Tp_y,Tp_z,sin_alpha,alpha_prime\n0,-1,0,0,-1,0,0,-1,1\n", 0) == 0);
}

TEST_CASE("numerical angular rate of the shadow curve") {
  const auto sc = CylinderScenario::make(1, 1, 0, 1);
  Cylinder cyl(1.0, v3(0, 0, 1));
  ShadowOptions o;
  o.resample = false;
  const auto curve = build_shadow(cyl, Segment(sc.X(), sc.Y()), o).curve;
  const auto rate = angular_rate(curve);
  REQUIRE(rate.size() == curve.size());
  for (std::size_t i = 0; i < rate.size(); ++i) CHECK(std::abs(rate[i] - sc.alpha_prime(curve.nodes[i].point(2))) < 1e-6);
}
