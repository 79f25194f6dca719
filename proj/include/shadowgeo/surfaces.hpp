#pragma once

#include <functional>
#include <optional>

#include "shadowgeo/expression.hpp"
#include "shadowgeo/geometry.hpp"

namespace shadowgeo {

/// Sphere (|p - c|^2 - rho^2) / (2 rho); the scaling makes F a first-order
/// signed distance near the surface.
class Sphere final : public Surface {
 public:
  Sphere(double radius, Vec center, std::optional<Box> box = std::nullopt);
  Sphere(double radius, int dimension);

  int dimension() const override { return static_cast<int>(center_.size()); }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "sphere"; }

  double radius() const { return radius_; }
  const Vec& center() const { return center_; }

 private:
  double radius_;
  Vec center_;
  Box box_;
};

/// Round cylinder |p - <p,a> a|^2 = rho^2 about a line through the origin.
class Cylinder final : public Surface {
 public:
  Cylinder(double radius, Vec axis, std::optional<Box> box = std::nullopt);

  int dimension() const override { return static_cast<int>(axis_.size()); }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "cylinder"; }

  double radius() const { return radius_; }
  const Vec& axis() const { return axis_; }

 private:
  double radius_;
  Vec axis_;
  Box box_;
};

/// Axis-aligned ellipsoid sum (p_i / a_i)^2 = 1, written as half of that
/// quadratic minus one half.
class Ellipsoid final : public Surface {
 public:
  explicit Ellipsoid(Vec semi_axes, std::optional<Box> box = std::nullopt);

  int dimension() const override { return static_cast<int>(semi_axes_.size()); }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "ellipsoid"; }

 private:
  Vec semi_axes_;
  Box box_;
};

/// Torus about the z axis in R^3 in the quartic form
/// (|p|^2 + R^2 - r^2)^2 - 4 R^2 (x^2 + y^2), smooth everywhere.
class Torus final : public Surface {
 public:
  Torus(double major, double minor, std::optional<Box> box = std::nullopt);

  int dimension() const override { return 3; }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "torus"; }

 private:
  double major_;
  double minor_;
  Box box_;
};

/// Hyperplane <n, p> = offset with unit n.
class Plane final : public Surface {
 public:
  Plane(Vec normal, double offset, std::optional<Box> box = std::nullopt);

  int dimension() const override { return static_cast<int>(normal_.size()); }
  double value(const Vec& p) const override { return normal_.dot(p) - offset_; }
  Vec gradient(const Vec&) const override { return normal_; }
  Mat hessian(const Vec&) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "plane"; }

 private:
  Vec normal_;
  double offset_;
  Box box_;
};

/// Graph x_n = f(x_1, ..., x_{n-1}); F = f - x_n with symbolic derivatives.
/// Variable names are `x`, `y` for n = 3, otherwise `x1` ... `x{n-1}`
/// (with `x`, `y` accepted as aliases of the first two).
class GraphSurface final : public Surface {
 public:
  GraphSurface(const std::string& expression, int dimension,
               std::optional<Box> domain = std::nullopt);

  int dimension() const override { return dimension_; }
  double value(const Vec& p) const override;
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return "graph"; }

  double height(const Vec& base) const;
  const Expression& expression() const { return f_; }

 private:
  int dimension_;
  Expression f_;
  std::vector<Expression> df_;
  std::vector<Expression> d2f_;  // row-major (n-1)^2
  Box box_;
};

/// User-supplied F with finite-difference gradient and Hessian unless the
/// derivatives are provided.
class FunctionSurface final : public Surface {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  FunctionSurface(int dimension, ValueFn value, Box box, GradientFn gradient = nullptr,
                  HessianFn hessian = nullptr, std::string name = "function");

  int dimension() const override { return dimension_; }
  double value(const Vec& p) const override { return value_(p); }
  Vec gradient(const Vec& p) const override;
  Mat hessian(const Vec& p) const override;
  Box bounds() const override { return box_; }
  std::string name() const override { return name_; }

 private:
  int dimension_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  Box box_;
  std::string name_;
};

Box cube_box(int dimension, const Vec& center, double half_width);

}  // namespace shadowgeo
