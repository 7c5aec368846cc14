#pragma once

#include <array>
#include <memory>
#include <string>

namespace pscal::cli {

/// Evaluation point of a field expression.
struct ExprPoint {
  std::array<double, 3> position{};
  double scal_b = 0.0;
};

/// Arithmetic expression over node coordinates.
///
/// Grammar: numbers, variables x y z scal_B pi e, operators + - * / ^ (right
/// associative) with unary minus, parentheses, the functions sin cos tan exp
/// log sqrt abs, and Y(l, m): the real orthonormal spherical harmonic of
/// degree l and order m evaluated at the unit direction of the position.
class Expression {
 public:
  /// Throws InputError naming the offending token.
  static Expression parse(const std::string& text);

  double evaluate(const ExprPoint& p) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Real orthonormal spherical harmonic on the unit sphere (no Condon-Shortley
/// phase); `dir` need not be normalized. Throws DomainError unless |m| <= l.
double real_spherical_harmonic(int l, int m, const std::array<double, 3>& dir);

}  // namespace pscal::cli
