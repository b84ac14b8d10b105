#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aqe/expr/rational.hpp"

namespace aqe {

/// Upper bound on chart dimension handled by the expression kernel.
/// Riemannian extensions double the chart, so manifolds of dimension up to 5 can be extended.
inline constexpr std::size_t kMaxVars = 10;

using Exponents = std::array<std::uint16_t, kMaxVars>;

/// Graded lexicographic order: total degree first, then lexicographic on x1, x2, ...
bool monomial_less(const Exponents& a, const Exponents& b) noexcept;
unsigned total_degree(const Exponents& e) noexcept;

/// Sparse multivariate polynomial with rational coefficients in canonical form:
/// terms sorted by decreasing monomial order, no zero coefficients, no repeated monomials.
class Polynomial {
 public:
  struct Term {
    Exponents exponents{};
    Rational coeff;
  };

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars);

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial monomial(std::size_t nvars, const Exponents& e, const Rational& c);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Constant coefficient (zero for the zero polynomial). Only meaningful when is_constant().
  Rational constant_value() const;
  unsigned degree() const noexcept;
  const Term& leading() const { return terms_.front(); }

  /// Largest monomial dividing every term (the monomial content).
  Exponents monomial_content() const noexcept;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(unsigned n) const;
  Polynomial derivative(std::size_t var) const;
  /// Multiplies by x^e.
  Polynomial shifted(const Exponents& e) const;
  /// Divides by x^e; every term must be divisible.
  Polynomial unshifted(const Exponents& e) const;
  /// Exact quotient when `divisor` divides this polynomial, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;
  /// Same polynomial scaled so the leading coefficient is one; returns the scale factor removed.
  std::pair<Polynomial, Rational> make_monic() const;
  /// Embeds into a chart with more variables; the new variables do not occur.
  Polynomial lifted(std::size_t nvars) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  void canonicalize();

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace aqe
