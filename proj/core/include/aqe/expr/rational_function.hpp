#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aqe/expr/polynomial.hpp"

namespace aqe {

/// Quotient of polynomials with a factored denominator.
///
/// The denominator is a product of powers of monic, non-constant "atoms". Sums take the
/// least common multiple atom-wise, so fractions never need a multivariate GCD. After every
/// operation, atoms that divide the numerator exactly are cancelled. Variables are always
/// split off as their own atoms, which keeps the Type B pole 1/x1 in closed form.
class RationalFunction {
 public:
  struct Factor {
    Polynomial base;  // monic, non-constant
    int exponent = 0;  // > 0
  };

  RationalFunction() = default;
  explicit RationalFunction(Polynomial numerator);

  static RationalFunction constant(std::size_t nvars, const Rational& c);
  static RationalFunction variable(std::size_t nvars, std::size_t index);
  /// numerator / denominator; throws DomainError when the denominator is the zero polynomial.
  static RationalFunction quotient(const Polynomial& numerator, const Polynomial& denominator);

  std::size_t nvars() const noexcept { return num_.nvars(); }
  const Polynomial& numerator() const noexcept { return num_; }
  const std::vector<Factor>& denominator() const noexcept { return den_; }
  Polynomial denominator_polynomial() const;

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.empty(); }
  bool is_constant() const noexcept { return den_.empty() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  /// Throws DomainError when b is identically zero.
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction scaled(const Rational& c) const;
  RationalFunction pow(int n) const;
  RationalFunction derivative(std::size_t var) const;
  RationalFunction lifted(std::size_t nvars) const;

  /// Exact value; throws DomainError when a denominator atom vanishes at the point.
  Rational evaluate(std::span<const Rational> point) const;
  /// Float value; throws DomainError on an exact zero denominator, returns non-finite values otherwise.
  double evaluate(std::span<const double> point) const;

  std::string to_string(std::span<const std::string> names) const;

  /// Structural equality of the stored representation. Use (a - b).is_zero() for value equality.
  bool same_representation(const RationalFunction& other) const;

 private:
  RationalFunction(Polynomial numerator, std::vector<Factor> denominator);
  void add_factor(const Polynomial& monic_base, int exponent);
  void cancel();

  Polynomial num_;
  std::vector<Factor> den_;
};

}  // namespace aqe
