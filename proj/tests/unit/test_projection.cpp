#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "shadowgeo/error.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/surfaces.hpp"

using namespace shadowgeo;
using testgen::Rng;

namespace {

Vec v3(double x, double y, double z) { return Vec{{x, y, z}}; }

// Golden-section minimum of a unimodal function on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi, c = b - g * (b - a), d = a + g * (b - a);
  for (int k = 0; k < 200; ++k) {
    if (f(c) < f(d)) b = d;
    else a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return f(0.5 * (a + b));
}

}  // namespace

TEST_CASE("closest_point reference projections") {
  Sphere sphere(1.0, 3);
  auto r = closest_point(sphere, v3(2, 0, 0));
  CHECK((r.footpoint - v3(1, 0, 0)).norm() < 1e-12);
  CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));

  const Vec on = v3(0, 0.6, 0.8);
  r = closest_point(sphere, on);
  CHECK((r.footpoint - on).norm() == 0.0);
  CHECK(r.distance == 0.0);

  Cylinder cyl(1.0, v3(0, 0, 1));
  r = closest_point(cyl, v3(-0.5, 0.5, 0.5));
  const double c = std::sqrt(0.5);
  CHECK((r.footpoint - v3(-c, c, 0.5)).norm() < 1e-12);
  CHECK(r.distance == doctest::Approx(1.0 - c).epsilon(1e-12));
}

TEST_CASE("closest_point input errors") {
  Sphere sphere(1.0, 3);
  ProjectionOptions o;
  o.seeds = 0;
  CHECK_THROWS_AS(closest_point(sphere, v3(2, 0, 0), o), Error);
  CHECK_THROWS_AS(closest_point(sphere, Vec::Zero(4)), Error);
  CHECK_THROWS_AS(closest_point(sphere, v3(std::nan(""), 0, 0)), Error);
}

TEST_CASE("analytic radial projections on sphere and cylinder") {
  Rng g(41);
  Sphere sphere(1.3, v3(0.1, 0.2, -0.3));
  Cylinder cyl(0.7, v3(0, 0, 1));
  for (int k = 0; k < 1000; ++k) {
    const Vec dir = g.unit(3);
    const Vec q = sphere.center() + g.uniform(0.1, 3.0) * dir;
    const auto r = closest_point(sphere, q);
    CHECK((r.footpoint - (sphere.center() + 1.3 * dir)).norm() < 1e-9);

    const double phi = g.uniform(0, 2 * std::numbers::pi), rho = g.uniform(0.1, 3.0), z = g.uniform(-2, 2);
    const auto rc = closest_point(cyl, v3(rho * std::cos(phi), rho * std::sin(phi), z));
    CHECK((rc.footpoint - v3(0.7 * std::cos(phi), 0.7 * std::sin(phi), z)).norm() < 1e-9);
    CHECK(rc.distance == doctest::Approx(std::abs(rho - 0.7)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("footpoints are perpendicular, on the surface and idempotent") {
  Rng g(42);
  std::vector<SurfacePtr> surfaces{std::make_shared<Ellipsoid>(v3(1.0, 2.0, 0.5)), std::make_shared<Torus>(2.0, 0.5),
                                   std::make_shared<GraphSurface>("0.3*x^2 - 0.2*y^2 + 0.1*x*y", 3)};
  for (const auto& s : surfaces) {
    CAPTURE(s->name());
    const Box box = s->bounds();
    for (int k = 0; k < 150; ++k) {
      const Vec q = box.center() + 0.45 * (g.box(box.lo, box.hi) - box.center());
      const auto r = closest_point(*s, q);
      CHECK(r.converged);
      CHECK(std::abs(s->value(r.footpoint)) <= on_surface_tolerance(r.footpoint));
      CHECK(std::abs((q - r.footpoint).norm() - r.distance) < 1e-9);
      if (r.distance > 1e-6) CHECK(line_angle(q - r.footpoint, s->gradient(r.footpoint)) < 1e-7);
      const auto again = closest_point(*s, r.footpoint);
      CHECK(again.distance == 0.0);
      CHECK((again.footpoint - r.footpoint).norm() == 0.0);
    }
  }
}

TEST_CASE("doubling the seed count never increases the distance") {
  Rng g(43);
  Torus torus(2.0, 0.6);
  Ellipsoid ell(v3(2.0, 1.0, 0.6));
  for (const Surface* s : {static_cast<const Surface*>(&torus), static_cast<const Surface*>(&ell)}) {
    for (int k = 0; k < 60; ++k) {
      const Vec q = g.box(Vec::Constant(3, -2.5), Vec::Constant(3, 2.5));
      double prev = std::numeric_limits<double>::infinity();
      for (int seeds = 1; seeds <= 32; seeds *= 2) {
        ProjectionOptions o;
        o.seeds = seeds;
        const auto r = closest_point(*s, q, o);
        CHECK(r.distance <= prev + 1e-15);
        prev = r.distance;
      }
    }
  }
}

TEST_CASE("medial clearance") {
  Sphere sphere(1.0, 3);
  CHECK(medial_clearance(sphere, Segment(v3(1, 0, 0), v3(0, 1, 0)), 65) > 1e-3);
  CHECK(medial_clearance(sphere, Segment(v3(1, 0, 0), v3(-1, 0, 0)), 65) <= kClearanceFloor);

  Cylinder cyl(1.0, v3(0, 0, 1));
  const Segment seg(v3(-1, 0, 0), v3(0, 1, 1));
  // independent check that the segment stays away from the axis
  const double axis_gap = golden_min([&](double s) { return seg.at(s).head(2).norm(); }, 0.0, 1.0);
  CHECK(axis_gap == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
  CHECK(medial_clearance(cyl, seg, 65) > 0.0);
}

TEST_CASE("contraction audit on the sphere chord is symmetric with r'(1/2) = 0") {
  Sphere sphere(1.0, 3);
  const auto audit = contraction_audit(sphere, Segment(v3(1, 0, 0), v3(0, 1, 0)), 257);
  CHECK(audit.passed);
  CHECK(audit.max_ratio < 1.0);
  const auto& rows = audit.samples;
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(std::abs(rows[i].r - rows[rows.size() - 1 - i].r) < 1e-12);
  CHECK(std::abs(rows[128].r_prime) < 1e-6);
}

TEST_CASE("contraction audit on a plane is identically zero") {
  Plane plane(v3(0, 0, 1), 0.0);
  const auto audit = contraction_audit(plane, Segment(v3(-1, 0.5, 0), v3(2, -1, 0)), 33);
  CHECK(audit.passed);
  CHECK(audit.max_ratio == 0.0);
  for (const auto& row : audit.samples) CHECK(row.r == 0.0);
}

TEST_CASE("contraction audit on the cylinder matches the closed-form distance") {
  Cylinder cyl(1.0, v3(0, 0, 1));
  const Segment seg(v3(-1, 0, 0), v3(0, 1, 1));
  const auto audit = contraction_audit(cyl, seg, 257);
  CHECK(audit.passed);
  CHECK(audit.max_ratio < 1.0);
  auto r = [&](double s) { return 1.0 - seg.at(s).head(2).norm(); };
  for (const auto& row : audit.samples) CHECK(row.r == doctest::Approx(r(row.s)).epsilon(1e-10).scale(1.0));
  double brute = 0.0;
  const int m = 10000;
  for (int i = 0; i < m; ++i) {
    const double s0 = static_cast<double>(i) / m, s1 = static_cast<double>(i + 1) / m;
    brute = std::max(brute, std::abs(r(s1) - r(s0)) / (seg.at(s1) - seg.at(s0)).norm());
  }
  CHECK(brute < 1.0);
  CHECK(audit.max_ratio <= brute + 1e-6);
}

TEST_CASE("contraction audit refuses segments through the medial axis") {
  Sphere sphere(1.0, 3);
  try {
    contraction_audit(sphere, Segment(v3(1, 0, 0), v3(-1, 0, 0)), 65);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("segment validation") {
  CHECK_THROWS_AS(Segment(v3(1, 0, 0), v3(1, 0, 0)), Error);
  Sphere sphere(1.0, 3);
  try {
    validate_segment(sphere, Segment(v3(1, 0, 0), v3(0, 2, 0)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OffSurface);
  }
}
