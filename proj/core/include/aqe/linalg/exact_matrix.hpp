#pragma once

#include <cstddef>
#include <vector>

#include "aqe/expr/rational.hpp"

namespace aqe {

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<Rational>& row);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Rank by fraction-free (Bareiss) elimination over the integers: each row is first
/// scaled by the lcm of its denominators, then every update is an exact integer division.
std::size_t exact_rank(const RationalMatrix& m);

/// Basis of the right kernel from the reduced row echelon form. Each basis vector has a 1 in
/// one free column and 0 in the others, so a full kernel comes out as the standard basis.
std::vector<std::vector<Rational>> exact_kernel(const RationalMatrix& m);

/// Solves m * x = b; empty result when inconsistent.
std::vector<Rational> exact_solve(const RationalMatrix& m, const std::vector<Rational>& b, bool* consistent);

}  // namespace aqe
