#include "aqe/geometry/tensor_field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace aqe {

TensorField::TensorField(std::size_t dim, std::size_t covariant, bool contravariant)
    : TensorField(dim, dim, covariant, contravariant) {}

TensorField::TensorField(std::size_t dim, std::size_t nvars, std::size_t covariant, bool contravariant)
    : dim_(dim), nvars_(nvars), covariant_(covariant), contravariant_(contravariant) {
  std::size_t count = 1;
  for (std::size_t r = 0; r < rank(); ++r) count *= dim;
  components_.assign(count, ScalarExpr::constant(nvars, 0));
}

std::size_t TensorField::offset(std::initializer_list<std::size_t> index) const {
  assert(index.size() == rank());
  std::size_t off = 0;
  for (auto i : index) {
    assert(i < dim_);
    off = off * dim_ + i;
  }
  return off;
}

ScalarExpr& TensorField::at(std::initializer_list<std::size_t> index) { return components_[offset(index)]; }

const ScalarExpr& TensorField::at(std::initializer_list<std::size_t> index) const {
  return components_[offset(index)];
}

TensorField TensorField::operator-(const TensorField& other) const {
  assert(other.components_.size() == components_.size());
  TensorField r = *this;
  for (std::size_t i = 0; i < components_.size(); ++i) r.components_[i] = components_[i] - other.components_[i];
  return r;
}

TensorField TensorField::operator+(const TensorField& other) const {
  assert(other.components_.size() == components_.size());
  TensorField r = *this;
  for (std::size_t i = 0; i < components_.size(); ++i) r.components_[i] = components_[i] + other.components_[i];
  return r;
}

TensorField TensorField::scaled(const ScalarExpr& factor) const {
  TensorField r = *this;
  for (auto& c : r.components_) c = c * factor;
  return r;
}

Verdict TensorField::is_zero() const {
  Verdict v = Verdict::kZero;
  for (const auto& c : components_) {
    v = combine(v, is_identically_zero(c));
    if (v == Verdict::kNonzero) break;
  }
  return v;
}

bool TensorField::rational_only() const {
  for (const auto& c : components_) {
    if (!c.rational_only()) return false;
  }
  return true;
}

double TensorField::max_abs(std::span<const FloatPoint> points) const {
  double worst = 0.0;
  for (const auto& p : points)
    for (const auto& c : components_) {
      if (c.is_zero_literal()) continue;
      worst = std::max(worst, std::abs(c.evaluate(std::span<const double>(p))));
    }
  return worst;
}

}  // namespace aqe
