#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace shadowgeo {

/// Small arithmetic expression language used for graph surfaces.
///
/// Grammar: numbers, the constants `pi` and `e`, named variables, binary
/// `+ - * / ^` (also the glyphs U+00B7 and U+2212), unary minus,
/// parentheses and the functions sin, cos, exp, sqrt, log. `^` is right
/// associative and binds tighter than unary minus (-x^2 == -(x^2)).
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text, const std::vector<std::string>& variables);
  static Expression constant(double value);

  double evaluate(std::span<const double> values) const;
  Expression derivative(std::size_t variable) const;

  std::size_t variable_count() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  std::string to_string() const;

 private:
  Expression(std::shared_ptr<const Node> root, std::vector<std::string> variables)
      : root_(std::move(root)), variables_(std::move(variables)) {}

  std::shared_ptr<const Node> root_;
  std::vector<std::string> variables_;
};

}  // namespace shadowgeo
