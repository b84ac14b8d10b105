#include "aqe/expr/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "aqe/error.hpp"

namespace aqe {

unsigned total_degree(const Exponents& e) noexcept {
  unsigned d = 0;
  for (auto v : e) d += v;
  return d;
}

bool monomial_less(const Exponents& a, const Exponents& b) noexcept {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da < db;
  // Among equal degrees, x1 > x2 > ... (lexicographic).
  return a < b;
}

namespace {

bool divides(const Exponents& d, const Exponents& e) noexcept {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (d[i] > e[i]) return false;
  }
  return true;
}

Exponents minus(const Exponents& a, const Exponents& b) noexcept {
  Exponents r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = static_cast<std::uint16_t>(a[i] - b[i]);
  return r;
}

Exponents plus(const Exponents& a, const Exponents& b) noexcept {
  Exponents r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = static_cast<std::uint16_t>(a[i] + b[i]);
  return r;
}

bool term_greater(const Polynomial::Term& a, const Polynomial::Term& b) {
  return monomial_less(b.exponents, a.exponents);
}

}  // namespace

Polynomial::Polynomial(std::size_t nvars) : nvars_(nvars) {
  if (nvars > kMaxVars) throw Error("chart dimension exceeds the supported maximum");
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  if (c != 0) p.terms_.push_back({Exponents{}, c});
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  assert(index < nvars);
  Polynomial p(nvars);
  Exponents e{};
  e[index] = 1;
  p.terms_.push_back({e, Rational(1)});
  return p;
}

Polynomial Polynomial::monomial(std::size_t nvars, const Exponents& e, const Rational& c) {
  Polynomial p(nvars);
  if (c != 0) p.terms_.push_back({e, c});
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.front().exponents) == 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  const auto& last = terms_.back();
  return total_degree(last.exponents) == 0 ? last.coeff : Rational(0);
}

unsigned Polynomial::degree() const noexcept {
  return terms_.empty() ? 0 : total_degree(terms_.front().exponents);
}

Exponents Polynomial::monomial_content() const noexcept {
  if (terms_.empty()) return Exponents{};
  Exponents c = terms_.front().exponents;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < kMaxVars; ++i) c[i] = std::min(c[i], t.exponents[i]);
  }
  return c;
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coeff += t.coeff;
    } else {
      if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
      merged.push_back(std::move(t));
    }
  }
  if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
  terms_ = std::move(merged);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  assert(nvars_ == other.nvars_);
  if (other.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && term_greater(*a, *b))) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || term_greater(*b, *a)) {
      out.push_back(*b++);
    } else {
      Rational c = a->coeff + b->coeff;
      if (c != 0) out.push_back({a->exponents, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  assert(a.nvars_ == b.nvars_);
  Polynomial r(a.nvars_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.is_constant()) return a * b.constant_value();
  if (a.is_constant()) return b * a.constant_value();
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) r.terms_.push_back({plus(s.exponents, t.exponents), s.coeff * t.coeff});
  }
  r.canonicalize();
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (n != 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n != 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial r(nvars_);
  for (const auto& t : terms_) {
    const auto k = t.exponents[var];
    if (k == 0) continue;
    Term d{t.exponents, t.coeff * k};
    d.exponents[var] = static_cast<std::uint16_t>(k - 1);
    r.terms_.push_back(std::move(d));
  }
  // Differentiation keeps distinct monomials distinct but may reorder them.
  r.canonicalize();
  return r;
}

Polynomial Polynomial::shifted(const Exponents& e) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.exponents = plus(t.exponents, e);
  return r;
}

Polynomial Polynomial::unshifted(const Exponents& e) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) {
    assert(divides(e, t.exponents));
    t.exponents = minus(t.exponents, e);
  }
  r.canonicalize();
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  assert(!divisor.is_zero());
  Polynomial quotient(nvars_);
  if (is_zero()) return quotient;
  if (divisor.is_constant()) return *this * Rational(1 / divisor.constant_value());
  if (degree() < divisor.degree()) return std::nullopt;
  // A single divisor is a Groebner basis of its ideal, so the remainder vanishes iff it divides.
  Polynomial rest = *this;
  const Term& lead = divisor.leading();
  while (!rest.is_zero()) {
    const Term& t = rest.leading();
    if (!divides(lead.exponents, t.exponents)) return std::nullopt;
    Polynomial step = monomial(nvars_, minus(t.exponents, lead.exponents), t.coeff / lead.coeff);
    rest -= step * divisor;
    quotient += step;
  }
  return quotient;
}

std::pair<Polynomial, Rational> Polynomial::make_monic() const {
  if (is_zero()) return {*this, Rational(1)};
  Rational lead = leading().coeff;
  Polynomial r = *this * Rational(1 / lead);
  return {std::move(r), lead};
}

Polynomial Polynomial::lifted(std::size_t nvars) const {
  assert(nvars >= nvars_);
  Polynomial r = *this;
  r.nvars_ = nvars;
  // Extra variables have exponent zero, so the order is unchanged.
  return r;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  assert(point.size() >= nvars_);
  Rational sum = 0;
  Rational term;
  mpz_class scratch;
  for (const auto& t : terms_) {
    term = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i) {
      const auto k = t.exponents[i];
      if (k == 0) continue;
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), point[i].get_num_mpz_t(), k);
      mpz_pow_ui(p.get_den_mpz_t(), point[i].get_den_mpz_t(), k);
      term *= p;
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  assert(point.size() >= nvars_);
  double sum = 0.0;
  for (const auto& t : terms_) {
    double term = t.coeff.get_d();
    for (std::size_t i = 0; i < nvars_; ++i) {
      const auto k = t.exponents[i];
      if (k == 1) {
        term *= point[i];
      } else if (k > 1) {
        term *= std::pow(point[i], static_cast<int>(k));
      }
    }
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      const auto k = t.exponents[i];
      if (k == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += names[i];
      if (k > 1) mono += '^' + std::to_string(k);
    }
    if (mono.empty()) {
      out << aqe::to_string(c);
    } else if (c == 1) {
      out << mono;
    } else {
      out << aqe::to_string(c) << '*' << mono;
    }
  }
  return out.str();
}

}  // namespace aqe
