#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aqe/expr/rational_function.hpp"

namespace aqe {

enum class ExprKind {
  kRational,  // canonical rational-function leaf: constants, coordinates and all exp/log-free subtrees
  kSum,
  kProduct,
  kQuotient,
  kPower,
  kExp,
  kLog,
};

/// Point of a chart in exact arithmetic.
using ExactPoint = std::vector<Rational>;
/// Point of a chart in double precision.
using FloatPoint = std::vector<double>;

/// Immutable scalar expression over the coordinates of a chart.
///
/// Construction folds every exp/log-free subtree into a single RationalFunction leaf, so an
/// expression is rational_only() exactly when it is a leaf. Copies share the underlying node.
class ScalarExpr {
 public:
  /// The constant 0 on a zero-dimensional chart; mostly useful as a placeholder.
  ScalarExpr();
  explicit ScalarExpr(RationalFunction rf);

  static ScalarExpr constant(std::size_t nvars, const Rational& c);
  static ScalarExpr coordinate(std::size_t nvars, std::size_t index);
  static ScalarExpr exp(const ScalarExpr& arg);
  static ScalarExpr log(const ScalarExpr& arg);

  std::size_t nvars() const noexcept;
  ExprKind kind() const noexcept;
  bool rational_only() const noexcept { return kind() == ExprKind::kRational; }
  /// The leaf value; throws NonRationalError for exp/log trees.
  const RationalFunction& rational() const;
  /// Children of sum/product/quotient/power/exp/log nodes.
  std::span<const ScalarExpr> operands() const noexcept;
  /// Exponent of a power node.
  int exponent() const noexcept;

  /// True for the literal zero leaf. This is a structural test; see is_identically_zero().
  bool is_zero_literal() const noexcept;
  bool is_constant_literal() const noexcept;

  ScalarExpr operator-() const;
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
  ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
  ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }
  ScalarExpr scaled(const Rational& c) const;
  ScalarExpr pow(int n) const;

  /// Exact partial derivative with respect to coordinate `index`.
  ScalarExpr differentiate(std::size_t index) const;
  /// Same expression on a chart with more coordinates (the new ones do not occur).
  ScalarExpr lifted(std::size_t nvars) const;

  /// Exact value. Throws NonRationalError for exp/log trees and DomainError at a pole.
  Rational evaluate(std::span<const Rational> point) const;
  /// Double-precision value. Throws DomainError at a pole or for log of a non-positive value.
  double evaluate(std::span<const double> point) const;
  double evaluate_float(std::span<const Rational> point) const;

  /// Text in the parser grammar; parse(to_string(e)) is the same function as e.
  std::string to_string(std::span<const std::string> names) const;
  /// Prints with default names x1, x2, ...
  std::string to_string() const;

  struct Node;

 private:
  explicit ScalarExpr(std::shared_ptr<const Node> node);
  static ScalarExpr make(ExprKind kind, std::vector<ScalarExpr> args, int exponent = 0);

  std::shared_ptr<const Node> node_;
};

/// Default coordinate names x1..xn.
std::vector<std::string> default_coordinate_names(std::size_t n);

}  // namespace aqe
