#include "aqe/expr/rational_function.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>

#include "aqe/error.hpp"

namespace aqe {

namespace {

// Index of the variable when `p` is exactly x_i, otherwise -1.
int single_variable(const Polynomial& p) {
  if (p.terms().size() != 1 || p.leading().coeff != 1) return -1;
  const auto& e = p.leading().exponents;
  int index = -1;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (e[i] == 0) continue;
    if (e[i] != 1 || index >= 0) return -1;
    index = static_cast<int>(i);
  }
  return index;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial numerator) : num_(std::move(numerator)) {}

RationalFunction::RationalFunction(Polynomial numerator, std::vector<Factor> denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  cancel();
}

RationalFunction RationalFunction::constant(std::size_t nvars, const Rational& c) {
  return RationalFunction(Polynomial::constant(nvars, c));
}

RationalFunction RationalFunction::variable(std::size_t nvars, std::size_t index) {
  return RationalFunction(Polynomial::variable(nvars, index));
}

void RationalFunction::add_factor(const Polynomial& monic_base, int exponent) {
  if (exponent == 0) return;
  for (auto& f : den_) {
    if (f.base == monic_base) {
      f.exponent += exponent;
      return;
    }
  }
  den_.push_back({monic_base, exponent});
}

RationalFunction RationalFunction::quotient(const Polynomial& numerator, const Polynomial& denominator) {
  if (denominator.is_zero()) throw DomainError("division by the zero polynomial");
  const std::size_t n = denominator.nvars();
  const Exponents content = denominator.monomial_content();
  Polynomial rest = denominator.unshifted(content);
  auto [monic, lead] = rest.make_monic();
  RationalFunction r(numerator * Rational(1 / lead));
  for (std::size_t i = 0; i < n; ++i) {
    if (content[i] > 0) r.add_factor(Polynomial::variable(n, i), content[i]);
  }
  if (!monic.is_constant()) r.add_factor(monic, 1);
  r.cancel();
  return r;
}

Polynomial RationalFunction::denominator_polynomial() const {
  Polynomial d = Polynomial::constant(nvars(), 1);
  for (const auto& f : den_) d = d * f.base.pow(static_cast<unsigned>(f.exponent));
  return d;
}

void RationalFunction::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    const int var = single_variable(f.base);
    while (f.exponent > 0) {
      if (var >= 0) {
        const auto k = num_.monomial_content()[static_cast<std::size_t>(var)];
        if (k == 0) break;
        const int take = std::min<int>(k, f.exponent);
        Exponents e{};
        e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(take);
        num_ = num_.unshifted(e);
        f.exponent -= take;
      } else {
        auto q = num_.divide_exact(f.base);
        if (!q) break;
        num_ = std::move(*q);
        --f.exponent;
      }
    }
  }
  std::erase_if(den_, [](const Factor& f) { return f.exponent == 0; });
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
  RationalFunction r = *this;
  r.num_ *= c;
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  assert(a.nvars() == b.nvars());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.empty() && b.den_.empty()) return RationalFunction(a.num_ + b.num_);
  // Least common multiple taken atom-wise.
  std::vector<RationalFunction::Factor> lcm = a.den_;
  for (const auto& f : b.den_) {
    auto it = std::find_if(lcm.begin(), lcm.end(), [&](const auto& g) { return g.base == f.base; });
    if (it == lcm.end()) {
      lcm.push_back(f);
    } else {
      it->exponent = std::max(it->exponent, f.exponent);
    }
  }
  auto cofactor = [&](const std::vector<RationalFunction::Factor>& den) {
    Polynomial m = Polynomial::constant(a.nvars(), 1);
    for (const auto& f : lcm) {
      int have = 0;
      for (const auto& g : den) {
        if (g.base == f.base) have = g.exponent;
      }
      if (f.exponent > have) m = m * f.base.pow(static_cast<unsigned>(f.exponent - have));
    }
    return m;
  };
  Polynomial num = a.num_ * cofactor(a.den_) + b.num_ * cofactor(b.den_);
  return RationalFunction(std::move(num), std::move(lcm));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  assert(a.nvars() == b.nvars());
  if (a.is_zero() || b.is_zero()) return RationalFunction::constant(a.nvars(), 0);
  if (b.is_constant()) return a.scaled(b.constant_value());
  if (a.is_constant()) return b.scaled(a.constant_value());
  RationalFunction r(a.num_ * b.num_);
  r.den_ = a.den_;
  for (const auto& f : b.den_) r.add_factor(f.base, f.exponent);
  r.cancel();
  return r;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw DomainError("division by an identically zero expression");
  if (b.is_constant()) return a.scaled(Rational(1 / b.constant_value()));
  return a * RationalFunction::quotient(b.denominator_polynomial(), b.num_);
}

RationalFunction RationalFunction::pow(int n) const {
  if (n < 0) return (RationalFunction::constant(nvars(), 1) / *this).pow(-n);
  RationalFunction r(num_.pow(static_cast<unsigned>(n)));
  if (n == 0) return r;
  for (const auto& f : den_) r.den_.push_back({f.base, f.exponent * n});
  return r;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  const std::size_t n = nvars();
  if (den_.empty()) return RationalFunction(num_.derivative(var));
  // d(N / prod B^e) = (N' prod_S B - N sum_S e B' prod_{S\k} B) / (prod B^e * prod_S B),
  // where S holds the atoms that depend on the variable.
  std::vector<std::size_t> moving;
  std::vector<Polynomial> base_derivs;
  for (std::size_t k = 0; k < den_.size(); ++k) {
    Polynomial d = den_[k].base.derivative(var);
    if (!d.is_zero()) {
      moving.push_back(k);
      base_derivs.push_back(std::move(d));
    }
  }
  if (moving.empty()) return RationalFunction(num_.derivative(var), den_);
  Polynomial prod_all = Polynomial::constant(n, 1);
  for (auto k : moving) prod_all = prod_all * den_[k].base;
  Polynomial numerator = num_.derivative(var) * prod_all;
  for (std::size_t s = 0; s < moving.size(); ++s) {
    Polynomial others = Polynomial::constant(n, den_[moving[s]].exponent);
    for (std::size_t t = 0; t < moving.size(); ++t) {
      if (t != s) others = others * den_[moving[t]].base;
    }
    numerator -= num_ * base_derivs[s] * others;
  }
  std::vector<Factor> den = den_;
  for (auto k : moving) ++den[k].exponent;
  return RationalFunction(std::move(numerator), std::move(den));
}

RationalFunction RationalFunction::lifted(std::size_t nvars) const {
  RationalFunction r(num_.lifted(nvars));
  for (const auto& f : den_) r.den_.push_back({f.base.lifted(nvars), f.exponent});
  return r;
}

Rational RationalFunction::evaluate(std::span<const Rational> point) const {
  Rational value = num_.evaluate(point);
  for (const auto& f : den_) {
    Rational b = f.base.evaluate(point);
    if (b == 0) throw DomainError("pole of a rational expression at the evaluation point");
    for (int i = 0; i < f.exponent; ++i) value /= b;
  }
  return value;
}

double RationalFunction::evaluate(std::span<const double> point) const {
  double value = num_.evaluate(point);
  for (const auto& f : den_) {
    const double b = f.base.evaluate(point);
    if (b == 0.0) throw DomainError("pole of a rational expression at the evaluation point");
    for (int i = 0; i < f.exponent; ++i) value /= b;
  }
  return value;
}

std::string RationalFunction::to_string(std::span<const std::string> names) const {
  std::string num = num_.to_string(names);
  if (den_.empty()) return num;
  if (num_.terms().size() > 1) num = "(" + num + ")";
  std::string den;
  for (const auto& f : den_) {
    if (!den.empty()) den += '*';
    std::string b = f.base.to_string(names);
    if (f.base.terms().size() > 1) b = "(" + b + ")";
    den += b;
    if (f.exponent > 1) den += '^' + std::to_string(f.exponent);
  }
  if (den_.size() > 1) den = "(" + den + ")";
  return num + "/" + den;
}

bool RationalFunction::same_representation(const RationalFunction& other) const {
  if (!(num_ == other.num_) || den_.size() != other.den_.size()) return false;
  for (std::size_t i = 0; i < den_.size(); ++i) {
    if (!(den_[i].base == other.den_[i].base) || den_[i].exponent != other.den_[i].exponent) return false;
  }
  return true;
}

}  // namespace aqe
