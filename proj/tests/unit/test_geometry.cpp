#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "shadowgeo/error.hpp"
#include "shadowgeo/geometry.hpp"
#include "shadowgeo/revolution.hpp"
#include "shadowgeo/surfaces.hpp"

using namespace shadowgeo;
using testgen::Rng;

namespace {

Vec v3(double x, double y, double z) { return Vec{{x, y, z}}; }

double det3(const Vec& a, const Vec& b, const Vec& c) {
  return a(0) * (b(1) * c(2) - b(2) * c(1)) - a(1) * (b(0) * c(2) - b(2) * c(0)) + a(2) * (b(0) * c(1) - b(1) * c(0));
}

struct Sampler {
  SurfacePtr surface;
  std::function<Vec(Rng&)> draw;
};

std::vector<Sampler> builtin_samplers() {
  std::vector<Sampler> out;
  out.push_back({std::make_shared<Sphere>(1.7, v3(0.2, -0.1, 0.4)), [](Rng& g) {
                   return Vec(v3(0.2, -0.1, 0.4) + 1.7 * g.unit(3));
                 }});
  out.push_back({std::make_shared<Cylinder>(0.8, v3(0, 0, 1)), [](Rng& g) {
                   const double phi = g.uniform(0, 2 * std::numbers::pi);
                   return v3(0.8 * std::cos(phi), 0.8 * std::sin(phi), g.uniform(-2, 2));
                 }});
  out.push_back({std::make_shared<Ellipsoid>(v3(1.0, 2.0, 0.5)), [](Rng& g) {
                   const Vec u = g.unit(3);
                   return v3(u(0), 2.0 * u(1), 0.5 * u(2));
                 }});
  out.push_back({std::make_shared<Torus>(2.0, 0.5), [](Rng& g) {
                   const double a = g.uniform(0, 2 * std::numbers::pi), b = g.uniform(0, 2 * std::numbers::pi);
                   return v3((2 + 0.5 * std::cos(b)) * std::cos(a), (2 + 0.5 * std::cos(b)) * std::sin(a),
                             0.5 * std::sin(b));
                 }});
  const Vec pn = v3(1, 2, -2) / 3.0;
  out.push_back({std::make_shared<Plane>(pn, 0.3), [pn](Rng& g) {
                   Vec p = g.box(Vec::Constant(3, -3), Vec::Constant(3, 3));
                   return Vec(p - (pn.dot(p) - 0.3) * pn);
                 }});
  auto rev = std::make_shared<RevolutionSurface>(std::make_shared<ParabolicProfile>(1.0, 1.0), -1.5, 1.5, 4);
  out.push_back({rev, [rev](Rng& g) {
                   Vec radial = Vec::Zero(4);
                   radial.tail(3) = g.unit(3);
                   return rev->point(g.uniform(-1.5, 1.5), radial);
                 }});
  auto graph = std::make_shared<GraphSurface>("sin(x)*cos(y) + 0.3*x^2 - exp(0.2*y)", 3);
  out.push_back({graph, [graph](Rng& g) {
                   const double x = g.uniform(-1.5, 1.5), y = g.uniform(-1.5, 1.5);
                   return v3(x, y, graph->height(Vec{{x, y}}));
                 }});
  return out;
}

}  // namespace

TEST_CASE("wedge_norm3 reference values") {
  Vec e1 = Vec::Unit(4, 0), e2 = Vec::Unit(4, 1), e3 = Vec::Unit(4, 2);
  CHECK(wedge_norm3(e1, e2, e3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wedge_norm3(e1, e2, Vec(e1 + e2)) == doctest::Approx(0.0).epsilon(1e-14));
  const Vec a = v3(1, 1, 0), b = v3(0, 1, 1), c = v3(1, 0, 1);
  CHECK(wedge_norm3(a, b, c) == doctest::Approx(std::abs(det3(a, b, c))).epsilon(1e-14));
  CHECK(std::abs(det3(a, b, c)) == doctest::Approx(2.0));
}

TEST_CASE("wedge_norm3 rejects mixed dimensions") {
  CHECK_THROWS_AS(wedge_norm3(Vec::Unit(3, 0), Vec::Unit(4, 1), Vec::Unit(3, 2)), Error);
}

TEST_CASE("wedge_norm3 matches the absolute 3x3 determinant in R^3") {
  Rng g(11);
  for (int k = 0; k < 500; ++k) {
    const Vec a = g.gaussian(3), b = g.gaussian(3), c = g.gaussian(3);
    CHECK(wedge_norm3(a, b, c) == doctest::Approx(std::abs(det3(a, b, c))).epsilon(1e-10));
  }
}

TEST_CASE("wedge_norm3 is permutation and shear invariant and obeys Hadamard") {
  Rng g(12);
  for (int k = 0; k < 1000; ++k) {
    const int n = 3 + static_cast<int>(g.next() % 6);
    const Vec u = g.gaussian(n), v = g.gaussian(n), w = g.gaussian(n);
    const double base = wedge_norm3(u, v, w);
    const double scale = std::max(base, 1e-12);
    CHECK(std::abs(wedge_norm3(v, u, w) - base) <= 1e-10 * scale);
    CHECK(std::abs(wedge_norm3(w, v, u) - base) <= 1e-10 * scale);
    CHECK(std::abs(wedge_norm3(u, w, v) - base) <= 1e-10 * scale);
    const double t = g.uniform(-3, 3);
    CHECK(std::abs(wedge_norm3(Vec(u + t * v), v, w) - base) <= 1e-10 * std::max(scale, u.norm() * v.norm() * w.norm()));
    CHECK(base <= u.norm() * v.norm() * w.norm() * (1 + 1e-12));
  }
}

TEST_CASE("wedge3 components reproduce the norm") {
  Rng g(13);
  for (int k = 0; k < 200; ++k) {
    const int n = 3 + static_cast<int>(g.next() % 5);
    const Vec u = g.gaussian(n), v = g.gaussian(n), w = g.gaussian(n);
    CHECK(wedge3(u, v, w).norm() == doctest::Approx(wedge_norm3(u, v, w)).epsilon(1e-10));
  }
}

TEST_CASE("frame_at reference frames") {
  Sphere sphere(1.0, 3);
  const Frame f = frame_at(sphere, v3(1, 0, 0));
  CHECK(std::abs(std::abs(f.normal(0)) - 1.0) < 1e-14);
  CHECK(f.tangents.col(0)(0) == doctest::Approx(0.0));
  CHECK(f.tangents.col(1)(0) == doctest::Approx(0.0));

  Cylinder cyl(1.0, v3(0, 0, 1));
  const Frame fc = frame_at(cyl, v3(0, 1, 5));
  CHECK(std::abs(std::abs(fc.normal(1)) - 1.0) < 1e-14);

  // |y|^2 - R(x)^2 with R = 1 + x^2: gradient (-2 R R', 2y) at x = 1, y = (2, 0).
  RevolutionSurface rev(std::make_shared<ParabolicProfile>(1.0, 1.0), -2, 2, 3);
  const Vec p = v3(1, 2, 0);
  const Frame fr = frame_at(rev, p);
  Vec fd(3);
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-6;
    Vec hi = p, lo = p;
    hi(i) += h;
    lo(i) -= h;
    fd(i) = (rev.value(hi) - rev.value(lo)) / (2 * h);
  }
  CHECK(line_angle(fr.normal, fd) < 1e-8);
  CHECK(line_angle(fr.normal, v3(-4, 2, 0)) < 1e-12);
}

TEST_CASE("frame_at errors") {
  Sphere sphere(1.0, 3);
  CHECK_THROWS_AS(frame_at(sphere, v3(2, 0, 0)), Error);
  try {
    frame_at(sphere, v3(2, 0, 0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OffSurface);
  }
  // F = |p|^2 - 0: the origin is on the level set with zero gradient.
  FunctionSurface cone(3, [](const Vec& p) { return p(0) * p(0) + p(1) * p(1) - p(2) * p(2); },
                       cube_box(3, Vec::Zero(3), 1.0));
  try {
    frame_at(cone, Vec::Zero(3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSurface);
  }
}

TEST_CASE("project_tangential") {
  Sphere sphere(1.0, 3);
  const Frame f = frame_at(sphere, v3(1, 0, 0));
  CHECK(project_tangential(f, f.normal).norm() < 1e-15);
  CHECK((project_tangential(f, v3(0, 0.3, -2)) - v3(0, 0.3, -2)).norm() < 1e-15);
  CHECK((project_tangential(f, v3(1, 1, 0)) - v3(0, 1, 0)).norm() < 1e-15);

  Rng g(14);
  for (int k = 0; k < 200; ++k) {
    const Frame fr = frame_at(sphere, g.unit(3));
    const Vec v = g.gaussian(3);
    const Vec t = project_tangential(fr, v);
    CHECK(std::abs(t.dot(fr.normal)) < 1e-12);
    CHECK((project_tangential(fr, t) - t).norm() < 1e-14);
  }
}

TEST_CASE("frames are orthonormal on random points of every builtin") {
  Rng g(15);
  for (const auto& s : builtin_samplers()) {
    CAPTURE(s.surface->name());
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Vec p = s.draw(g);
      const Frame f = frame_at(*s.surface, p);
      const int n = s.surface->dimension();
      Mat q(n, n);
      q.col(0) = f.normal;
      q.rightCols(n - 1) = f.tangents;
      worst = std::max(worst, (q.transpose() * q - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
      worst = std::max(worst, line_angle(f.normal, s.surface->gradient(p)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("analytic gradients match central differences and Hessians are symmetric") {
  Rng g(16);
  for (const auto& s : builtin_samplers()) {
    CAPTURE(s.surface->name());
    for (int k = 0; k < 200; ++k) {
      const Vec p = s.draw(g) + 0.05 * g.gaussian(s.surface->dimension());
      CHECK(gradient_check(*s.surface, p) < 1e-6);
      CHECK(hessian_asymmetry(*s.surface, p) < 1e-12);
    }
  }
}

TEST_CASE("finite-difference fallback for user surfaces") {
  FunctionSurface s(3, [](const Vec& p) { return p(0) * p(0) + 2 * p(1) * p(1) + 3 * p(2) * p(2) - 1; },
                    cube_box(3, Vec::Zero(3), 2.0));
  const Vec p = v3(0.3, -0.2, 0.4);
  CHECK((s.gradient(p) - v3(0.6, -0.8, 2.4)).norm() < 1e-6);
  CHECK((s.hessian(p) - Vec(v3(2, 4, 6)).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-4);
}
