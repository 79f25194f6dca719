#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "shadowgeo/cylinder_oracle.hpp"
#include "shadowgeo/error.hpp"
#include "shadowgeo/shadow_curve.hpp"
#include "shadowgeo/surfaces.hpp"

using namespace shadowgeo;
namespace fs = std::filesystem;

namespace {

Vec v3(double x, double y, double z) { return Vec{{x, y, z}}; }

SampledCurve circle(int n, double radius, double arc) {
  std::vector<Vec> pts;
  std::vector<double> ell;
  for (int i = 0; i <= n; ++i) {
    const double l = arc * i / n;
    pts.push_back(v3(radius * std::cos(l / radius), radius * std::sin(l / radius), 0));
    ell.push_back(l);
  }
  return SampledCurve::from_points(pts, ell);
}

ShadowCurve shadow(const Surface& s, const Segment& seg, int n, bool resample = true, bool warm = true) {
  ShadowOptions o;
  o.nodes = n;
  o.resample = resample;
  o.warm_start = warm;
  return build_shadow(s, seg, o);
}

}  // namespace

TEST_CASE("sphere chord projects to the great-circle arc in z = 0") {
  Sphere sphere(1.0, 3);
  const Segment seg(v3(1, 0, 0), v3(0, 1, 0));
  const auto sc = shadow(sphere, seg, 128);
  const auto& nodes = sc.curve.nodes;
  REQUIRE(nodes.size() == 129);
  CHECK((nodes.front().point - seg.a()).norm() == 0.0);
  CHECK((nodes.back().point - seg.b()).norm() == 0.0);
  for (const auto& n : nodes) {
    CHECK(std::abs(n.point.norm() - 1.0) < 1e-12);
    CHECK(std::abs(n.point(2)) < 1e-14);
  }
  CHECK(sc.curve.length() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-4));
}

TEST_CASE("shadow of a segment on a plane is the segment") {
  Plane plane(v3(0, 0, 1), 1.0);
  const Segment seg(v3(-1, 2, 1), v3(3, 0.5, 1));
  const auto sc = shadow(plane, seg, 32);
  for (const auto& n : sc.curve.nodes) CHECK((n.point - seg.at(n.s)).norm() < 1e-14);
  CHECK(sc.curve.length() == doctest::Approx(seg.length()).epsilon(1e-12));
}

TEST_CASE("cylinder shadow nodes match the closed-form footpoints") {
  const auto oracle = CylinderScenario::make(1, 1, 0, 1);
  Cylinder cyl(1.0, v3(0, 0, 1));
  const Segment seg(oracle.X(), oracle.Y());

  const auto raw = shadow(cyl, seg, 512, false);
  const double c = std::sqrt(0.5);
  CHECK((raw.curve.nodes[256].point - v3(-c, c, 0.5)).norm() < 1e-12);
  for (const auto& n : raw.curve.nodes) CHECK((n.point - oracle.point_Tprime(n.s)).norm() < 1e-8);

  const auto res = shadow(cyl, seg, 512);
  for (const auto& n : res.curve.nodes) CHECK((n.point - oracle.point_Tprime(n.s)).norm() < 1e-8);

  // polar angle of every node against the closed-form angle
  const auto angles = node_angles(res.curve);
  for (std::size_t i = 0; i < angles.size(); ++i) CHECK(std::abs(angles[i] - oracle.alpha(res.curve.nodes[i].s)) < 1e-8);
}

TEST_CASE("warm-started and cold-seeded constructions agree") {
  Ellipsoid ell(v3(1.0, 1.5, 0.7));
  const Vec a = v3(1, 0, 0), b = v3(0, 1.5, 0) * std::sqrt(0.5) + v3(0, 0, 0.7) * std::sqrt(0.5);
  const auto warm = shadow(ell, Segment(a, b), 64, false, true);
  const auto cold = shadow(ell, Segment(a, b), 64, false, false);
  for (std::size_t i = 0; i < warm.curve.size(); ++i)
    CHECK((warm.curve.nodes[i].point - cold.curve.nodes[i].point).norm() < 1e-9);
}

TEST_CASE("shadow nodes adhere to the surface") {
  Torus torus(2.0, 0.7);
  const double c = std::cos(0.9), s = std::sin(0.9);
  const Segment seg(v3(2.7, 0, 0), v3(2.0 * c + 0.7 * c * std::cos(0.8), 2.0 * s + 0.7 * s * std::cos(0.8), 0.7 * std::sin(0.8)));
  const auto sc = shadow(torus, seg, 128);
  for (const auto& n : sc.curve.nodes) CHECK(std::abs(torus.value(n.point)) <= 1e-8 * (1 + n.point.norm()));
}

TEST_CASE("shadow construction preconditions") {
  Sphere sphere(1.0, 3);
  try {
    shadow(sphere, Segment(v3(1, 0, 0), v3(-1, 0, 0)), 64);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_THROWS_AS(shadow(sphere, Segment(v3(1, 0, 0), v3(0, 1, 0)), 8), Error);
}

TEST_CASE("derivatives of a straight line") {
  std::vector<Vec> pts;
  const Vec d = v3(1, 2, 2) / 3.0;
  for (int i = 0; i <= 20; ++i) pts.push_back(v3(0.5, -1, 2) + 0.1 * i * d);
  const auto c = derivatives(SampledCurve::from_points(pts));
  CHECK(!c.nodes.front().d1);
  CHECK(!c.nodes.back().d1);
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    CHECK((*c.nodes[i].d1 - d).norm() < 1e-12);
    CHECK(c.nodes[i].d2->norm() < 1e-10);
  }
  CHECK(speed_constancy_check(c) < 1e-12);
  CHECK_THROWS_AS(derivatives(SampledCurve::from_points({v3(0, 0, 0), v3(1, 0, 0), v3(2, 0, 0), v3(3, 0, 0)})),
                  Error);
}

TEST_CASE("second derivative of a uniformly sampled circle has unit norm") {
  double prev = 1.0;
  for (int n : {32, 64, 128}) {
    const auto c = derivatives(circle(n, 1.0, std::numbers::pi));
    const double h = std::numbers::pi / n;
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) err = std::max(err, std::abs(c.nodes[i].d2->norm() - 1.0));
    CHECK(err < h * h);
    CHECK(err < prev);
    prev = err;
    CHECK(speed_constancy_check(c) < 1e-4);
  }
}

TEST_CASE("great-circle acceleration points at the centre") {
  const Vec u = v3(1, 0, 0), w = v3(0, 0.6, 0.8);
  std::vector<Vec> pts;
  std::vector<double> ell;
  for (int i = 0; i <= 256; ++i) {
    const double l = 2.0 * i / 256;
    pts.push_back(std::cos(l) * u + std::sin(l) * w);
    ell.push_back(l);
  }
  const auto c = derivatives(SampledCurve::from_points(pts, ell));
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const Vec acc = *c.nodes[i].d2;
    const double cosang = -acc.dot(c.nodes[i].point) / (acc.norm() * c.nodes[i].point.norm());
    CHECK(std::acos(std::min(1.0, cosang)) < 1e-4);
  }
}

TEST_CASE("speed check reports nonuniform sampling without throwing") {
  std::vector<Vec> pts;
  for (int i = 0; i <= 20; ++i) {
    const double t = (i / 20.0) * (i / 20.0);
    pts.push_back(v3(t, 0, 0));
  }
  SampledCurve c = SampledCurve::from_points(pts);
  // pretend the nodes are uniform in arc length
  for (std::size_t i = 0; i < c.size(); ++i) c.nodes[i].ell = static_cast<double>(i) / 20.0;
  const auto d = derivatives(c);
  CHECK(speed_constancy_check(d) > 0.1);
}

TEST_CASE("cylinder shadow speed deviation shrinks with refinement") {
  Cylinder cyl(1.0, v3(0, 0, 1));
  const Segment seg(v3(-1, 0, 0), v3(0, 1, 1));
  double prev = 1.0;
  for (int n : {128, 256, 512}) {
    const double dev = speed_constancy_check(derivatives(shadow(cyl, seg, n).curve));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("refinement converges at second order") {
  Ellipsoid ell(v3(1.0, 1.5, 0.7));
  const Vec a = v3(1, 0, 0), b = v3(0, 1.5 * std::sqrt(0.5), 0.7 * std::sqrt(0.5));
  Cylinder cyl(1.0, v3(0, 0, 1));
  struct Case {
    const Surface* s;
    Segment seg;
  };
  for (const Case& k : {Case{&ell, Segment(a, b)}, Case{&cyl, Segment(v3(-1, 0, 0), v3(0, 1, 1))}}) {
    std::vector<double> gaps;
    for (int n : {32, 64, 128}) {
      const auto coarse = shadow(*k.s, k.seg, n).curve;
      const auto fine = shadow(*k.s, k.seg, 2 * n).curve;
      double gap = 0.0;
      for (std::size_t i = 0; i < coarse.size(); ++i)
        gap = std::max(gap, (coarse.nodes[i].point - fine.nodes[2 * i].point).norm());
      gaps.push_back(gap);
    }
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) CHECK(std::log2(gaps[i] / gaps[i + 1]) >= 1.7);
  }
}

TEST_CASE("curve CSV and binary cache round trip") {
  Sphere sphere(1.0, 3);
  const auto c = derivatives(shadow(sphere, Segment(v3(1, 0, 0), v3(0, 1, 0)), 32).curve);
  std::ostringstream os;
  write_csv(os, c);
  const std::string text = os.str();
  CHECK(text.rfind("s,ell,x0,x1,x2,d1_0,d1_1,d1_2,d2_0,d2_1,d2_2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 34);

  const fs::path path = fs::temp_directory_path() / "shadowgeo-unit-cache.bin";
  write_curve_cache(path, c, 0xabcdefULL);
  const auto back = read_curve_cache(path, 0xabcdefULL);
  REQUIRE(back);
  REQUIRE(back->size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back->nodes[i].point == c.nodes[i].point);
    CHECK(back->nodes[i].ell == c.nodes[i].ell);
    CHECK(back->nodes[i].d1.has_value() == c.nodes[i].d1.has_value());
    if (c.nodes[i].d2) CHECK(*back->nodes[i].d2 == *c.nodes[i].d2);
  }
  CHECK(!read_curve_cache(path, 0xabcdeeULL));
  CHECK(!read_curve_cache(fs::temp_directory_path() / "shadowgeo-missing.bin", 1));
  fs::remove(path);
}

TEST_CASE("from_points validation") {
  CHECK_THROWS_AS(SampledCurve::from_points({v3(0, 0, 0), v3(1, 0, 0)}, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(SampledCurve::from_points({v3(0, 0, 0), Vec::Zero(2)}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(SampledCurve::from_points({v3(0, 0, 0)}, {0.0, 1.0}), Error);
}
