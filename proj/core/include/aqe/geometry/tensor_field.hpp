#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "aqe/expr/scalar_expr.hpp"
#include "aqe/expr/zero_test.hpp"

namespace aqe {

/// Tensor field on a chart: `covariant` lower slots, optionally followed by one upper slot.
/// Components are stored row-major with every extent equal to dim().
class TensorField {
 public:
  TensorField() = default;
  TensorField(std::size_t dim, std::size_t covariant, bool contravariant = false);
  TensorField(std::size_t dim, std::size_t nvars, std::size_t covariant, bool contravariant);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t covariant() const noexcept { return covariant_; }
  bool contravariant() const noexcept { return contravariant_; }
  std::size_t rank() const noexcept { return covariant_ + (contravariant_ ? 1 : 0); }

  ScalarExpr& at(std::initializer_list<std::size_t> index);
  const ScalarExpr& at(std::initializer_list<std::size_t> index) const;
  ScalarExpr& operator()(std::size_t i, std::size_t j) { return at({i, j}); }
  const ScalarExpr& operator()(std::size_t i, std::size_t j) const { return at({i, j}); }
  ScalarExpr& operator()(std::size_t i, std::size_t j, std::size_t k) { return at({i, j, k}); }
  const ScalarExpr& operator()(std::size_t i, std::size_t j, std::size_t k) const { return at({i, j, k}); }

  const std::vector<ScalarExpr>& components() const noexcept { return components_; }
  std::vector<ScalarExpr>& components() noexcept { return components_; }

  TensorField operator-(const TensorField& other) const;
  TensorField operator+(const TensorField& other) const;
  TensorField scaled(const ScalarExpr& factor) const;

  /// Conjunction of the component zero tests.
  Verdict is_zero() const;
  /// True when every component is an exp/log-free leaf.
  bool rational_only() const;
  /// Largest absolute component value over the points (float evaluation).
  double max_abs(std::span<const FloatPoint> points) const;

 private:
  std::size_t offset(std::initializer_list<std::size_t> index) const;

  std::size_t dim_ = 0;
  std::size_t nvars_ = 0;
  std::size_t covariant_ = 0;
  bool contravariant_ = false;
  std::vector<ScalarExpr> components_;
};

}  // namespace aqe
