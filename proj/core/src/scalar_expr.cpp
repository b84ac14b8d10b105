#include "aqe/expr/scalar_expr.hpp"

#include <cassert>
#include <cmath>

#include "aqe/error.hpp"

namespace aqe {

struct ScalarExpr::Node {
  ExprKind kind = ExprKind::kRational;
  std::size_t nvars = 0;
  RationalFunction rf;
  std::vector<ScalarExpr> args;
  int exponent = 0;
};

ScalarExpr::ScalarExpr() : ScalarExpr(RationalFunction::constant(0, 0)) {}

ScalarExpr::ScalarExpr(RationalFunction rf) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::kRational;
  node->nvars = rf.nvars();
  node->rf = std::move(rf);
  node_ = std::move(node);
}

ScalarExpr::ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

ScalarExpr ScalarExpr::make(ExprKind kind, std::vector<ScalarExpr> args, int exponent) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->nvars = args.front().nvars();
  node->args = std::move(args);
  node->exponent = exponent;
  return ScalarExpr(std::shared_ptr<const Node>(std::move(node)));
}

ScalarExpr ScalarExpr::constant(std::size_t nvars, const Rational& c) {
  return ScalarExpr(RationalFunction::constant(nvars, c));
}

ScalarExpr ScalarExpr::coordinate(std::size_t nvars, std::size_t index) {
  return ScalarExpr(RationalFunction::variable(nvars, index));
}

ScalarExpr ScalarExpr::exp(const ScalarExpr& arg) {
  if (arg.is_zero_literal()) return constant(arg.nvars(), 1);
  return make(ExprKind::kExp, {arg});
}

ScalarExpr ScalarExpr::log(const ScalarExpr& arg) {
  if (arg.is_constant_literal() && arg.rational().constant_value() == 1) return constant(arg.nvars(), 0);
  return make(ExprKind::kLog, {arg});
}

std::size_t ScalarExpr::nvars() const noexcept { return node_->nvars; }
ExprKind ScalarExpr::kind() const noexcept { return node_->kind; }

const RationalFunction& ScalarExpr::rational() const {
  if (node_->kind != ExprKind::kRational) throw NonRationalError("expression contains exp/log");
  return node_->rf;
}

std::span<const ScalarExpr> ScalarExpr::operands() const noexcept { return node_->args; }
int ScalarExpr::exponent() const noexcept { return node_->exponent; }

bool ScalarExpr::is_zero_literal() const noexcept { return rational_only() && node_->rf.is_zero(); }
bool ScalarExpr::is_constant_literal() const noexcept { return rational_only() && node_->rf.is_constant(); }

ScalarExpr ScalarExpr::operator-() const { return scaled(Rational(-1)); }

ScalarExpr ScalarExpr::scaled(const Rational& c) const {
  if (rational_only()) return ScalarExpr(node_->rf.scaled(c));
  if (c == 0) return constant(nvars(), 0);
  if (c == 1) return *this;
  return constant(nvars(), c) * *this;
}

namespace {

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.kind() != b.kind() || a.nvars() != b.nvars()) return false;
  if (a.rational_only()) return a.rational().same_representation(b.rational());
  if (a.exponent() != b.exponent()) return false;
  const auto x = a.operands();
  const auto y = b.operands();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!structurally_equal(x[i], y[i])) return false;
  }
  return true;
}

bool same_factors(const std::vector<ScalarExpr>& a, const std::vector<ScalarExpr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  assert(a.nvars() == b.nvars());
  if (a.rational_only() && b.rational_only()) return ScalarExpr(a.node_->rf + b.node_->rf);
  if (a.is_zero_literal()) return b;
  if (b.is_zero_literal()) return a;
  // Flatten nested sums, fold rational parts into one leading leaf, and collect terms that
  // differ only in their rational coefficient.
  const std::size_t n = a.nvars();
  RationalFunction rational_part = RationalFunction::constant(n, 0);
  struct Term {
    RationalFunction coeff;
    std::vector<ScalarExpr> factors;
  };
  std::vector<Term> terms;
  auto add_term = [&](const ScalarExpr& t) {
    Term term{RationalFunction::constant(n, 1), {}};
    if (t.kind() == ExprKind::kProduct) {
      for (const auto& f : t.operands()) {
        if (f.rational_only()) {
          term.coeff = term.coeff * f.node_->rf;
        } else {
          term.factors.push_back(f);
        }
      }
    } else {
      term.factors.push_back(t);
    }
    for (auto& existing : terms) {
      if (same_factors(existing.factors, term.factors)) {
        existing.coeff = existing.coeff + term.coeff;
        return;
      }
    }
    terms.push_back(std::move(term));
  };
  auto absorb = [&](const ScalarExpr& e) {
    if (e.rational_only()) {
      rational_part = rational_part + e.node_->rf;
    } else if (e.kind() == ExprKind::kSum) {
      for (const auto& t : e.operands()) {
        if (t.rational_only()) {
          rational_part = rational_part + t.node_->rf;
        } else {
          add_term(t);
        }
      }
    } else {
      add_term(e);
    }
  };
  absorb(a);
  absorb(b);
  std::vector<ScalarExpr> out;
  if (!rational_part.is_zero()) out.push_back(ScalarExpr(std::move(rational_part)));
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    const bool unit = t.coeff.is_constant() && t.coeff.constant_value() == 1;
    if (unit && t.factors.size() == 1) {
      out.push_back(t.factors.front());
      continue;
    }
    std::vector<ScalarExpr> factors;
    if (!unit) factors.push_back(ScalarExpr(std::move(t.coeff)));
    for (auto& f : t.factors) factors.push_back(std::move(f));
    out.push_back(ScalarExpr::make(ExprKind::kProduct, std::move(factors)));
  }
  if (out.empty()) return ScalarExpr::constant(n, 0);
  if (out.size() == 1) return out.front();
  return ScalarExpr::make(ExprKind::kSum, std::move(out));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  assert(a.nvars() == b.nvars());
  if (a.rational_only() && b.rational_only()) return ScalarExpr(a.node_->rf * b.node_->rf);
  if (a.is_zero_literal() || b.is_zero_literal()) return ScalarExpr::constant(a.nvars(), 0);
  RationalFunction coefficient = RationalFunction::constant(a.nvars(), 1);
  std::vector<ScalarExpr> factors;
  auto absorb = [&](const ScalarExpr& e) {
    if (e.rational_only()) {
      coefficient = coefficient * e.node_->rf;
    } else if (e.kind() == ExprKind::kProduct) {
      for (const auto& f : e.operands()) {
        if (f.rational_only()) {
          coefficient = coefficient * f.node_->rf;
        } else {
          factors.push_back(f);
        }
      }
    } else {
      factors.push_back(e);
    }
  };
  absorb(a);
  absorb(b);
  if (coefficient.is_zero()) return ScalarExpr::constant(a.nvars(), 0);
  const bool unit = coefficient.is_constant() && coefficient.constant_value() == 1;
  if (!unit) factors.insert(factors.begin(), ScalarExpr(std::move(coefficient)));
  if (factors.size() == 1) return factors.front();
  return ScalarExpr::make(ExprKind::kProduct, std::move(factors));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  assert(a.nvars() == b.nvars());
  if (b.rational_only()) {
    if (b.node_->rf.is_zero()) throw DomainError("division by the zero expression");
    const RationalFunction inverse = RationalFunction::constant(b.nvars(), 1) / b.node_->rf;
    return a * ScalarExpr(inverse);
  }
  if (a.is_zero_literal()) return a;
  return ScalarExpr::make(ExprKind::kQuotient, {a, b});
}

ScalarExpr ScalarExpr::pow(int n) const {
  if (rational_only()) return ScalarExpr(node_->rf.pow(n));
  if (n == 0) return constant(nvars(), 1);
  if (n == 1) return *this;
  return make(ExprKind::kPower, {*this}, n);
}

ScalarExpr ScalarExpr::differentiate(std::size_t index) const {
  assert(index < nvars());
  const auto& args = node_->args;
  switch (node_->kind) {
    case ExprKind::kRational:
      return ScalarExpr(node_->rf.derivative(index));
    case ExprKind::kSum: {
      ScalarExpr sum = constant(nvars(), 0);
      for (const auto& t : args) sum += t.differentiate(index);
      return sum;
    }
    case ExprKind::kProduct: {
      ScalarExpr sum = constant(nvars(), 0);
      for (std::size_t k = 0; k < args.size(); ++k) {
        ScalarExpr d = args[k].differentiate(index);
        if (d.is_zero_literal()) continue;
        for (std::size_t j = 0; j < args.size(); ++j) {
          if (j != k) d *= args[j];
        }
        sum += d;
      }
      return sum;
    }
    case ExprKind::kQuotient: {
      const ScalarExpr& u = args[0];
      const ScalarExpr& v = args[1];
      return (u.differentiate(index) * v - u * v.differentiate(index)) / v.pow(2);
    }
    case ExprKind::kPower: {
      const int n = node_->exponent;
      return args[0].pow(n - 1).scaled(Rational(n)) * args[0].differentiate(index);
    }
    case ExprKind::kExp:
      return *this * args[0].differentiate(index);
    case ExprKind::kLog:
      return args[0].differentiate(index) / args[0];
  }
  return constant(nvars(), 0);
}

ScalarExpr ScalarExpr::lifted(std::size_t n) const {
  if (n == nvars()) return *this;
  if (rational_only()) return ScalarExpr(node_->rf.lifted(n));
  std::vector<ScalarExpr> args;
  args.reserve(node_->args.size());
  for (const auto& a : node_->args) args.push_back(a.lifted(n));
  return make(node_->kind, std::move(args), node_->exponent);
}

Rational ScalarExpr::evaluate(std::span<const Rational> point) const {
  if (!rational_only()) throw NonRationalError("exact evaluation requested on an expression with exp/log");
  return node_->rf.evaluate(point);
}

double ScalarExpr::evaluate(std::span<const double> point) const {
  const auto& args = node_->args;
  switch (node_->kind) {
    case ExprKind::kRational:
      return node_->rf.evaluate(point);
    case ExprKind::kSum: {
      double s = 0.0;
      for (const auto& t : args) s += t.evaluate(point);
      return s;
    }
    case ExprKind::kProduct: {
      double p = 1.0;
      for (const auto& f : args) p *= f.evaluate(point);
      return p;
    }
    case ExprKind::kQuotient: {
      const double den = args[1].evaluate(point);
      if (den == 0.0) throw DomainError("division by zero at the evaluation point");
      return args[0].evaluate(point) / den;
    }
    case ExprKind::kPower:
      return std::pow(args[0].evaluate(point), node_->exponent);
    case ExprKind::kExp:
      return std::exp(args[0].evaluate(point));
    case ExprKind::kLog: {
      const double v = args[0].evaluate(point);
      if (!(v > 0.0)) throw DomainError("log of a non-positive value at the evaluation point");
      return std::log(v);
    }
  }
  return 0.0;
}

double ScalarExpr::evaluate_float(std::span<const Rational> point) const {
  std::vector<double> p(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) p[i] = point[i].get_d();
  return evaluate(std::span<const double>(p));
}

namespace {

// Leaves print bare inside a product only when they are a single positive term.
bool simple_factor(const ScalarExpr& e) {
  switch (e.kind()) {
    case ExprKind::kExp:
    case ExprKind::kLog:
    case ExprKind::kPower:
      return true;
    case ExprKind::kRational: {
      const auto& rf = e.rational();
      return rf.is_polynomial() && rf.numerator().terms().size() == 1 && rf.numerator().leading().coeff > 0 &&
             is_integer(rf.numerator().leading().coeff);
    }
    default:
      return false;
  }
}

std::string wrap(const ScalarExpr& e, std::span<const std::string> names) {
  std::string s = e.to_string(names);
  return simple_factor(e) ? s : "(" + s + ")";
}

}  // namespace

std::string ScalarExpr::to_string(std::span<const std::string> names) const {
  const auto& args = node_->args;
  switch (node_->kind) {
    case ExprKind::kRational:
      return node_->rf.to_string(names);
    case ExprKind::kSum: {
      std::string out = args.front().to_string(names);
      for (std::size_t i = 1; i < args.size(); ++i) {
        std::string t = args[i].to_string(names);
        if (!t.empty() && t.front() == '-') {
          out += " - " + t.substr(1);
        } else {
          out += " + " + t;
        }
      }
      return out;
    }
    case ExprKind::kProduct: {
      std::string out;
      for (const auto& f : args) {
        if (!out.empty()) out += '*';
        out += wrap(f, names);
      }
      return out;
    }
    case ExprKind::kQuotient:
      return wrap(args[0], names) + "/" + wrap(args[1], names);
    case ExprKind::kPower: {
      const std::string base = args[0].kind() == ExprKind::kExp || args[0].kind() == ExprKind::kLog
                                   ? args[0].to_string(names)
                                   : "(" + args[0].to_string(names) + ")";
      return base + "^" + std::to_string(node_->exponent);
    }
    case ExprKind::kExp:
      return "exp(" + args[0].to_string(names) + ")";
    case ExprKind::kLog:
      return "log(" + args[0].to_string(names) + ")";
  }
  return "0";
}

std::string ScalarExpr::to_string() const { return to_string(default_coordinate_names(nvars())); }

std::vector<std::string> default_coordinate_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

}  // namespace aqe
