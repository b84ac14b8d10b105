#include "aqe/solver/jet_system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "aqe/error.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/linalg/exact_matrix.hpp"
#include "aqe/linalg/float_rank.hpp"
#include "json.hpp"

namespace aqe {

bool JetSystem::rational_only() const {
  for (const auto& ai : a)
    for (const auto& e : ai)
      if (!e.rational_only()) return false;
  return true;
}

JetSystem build_jet_system(const AffineManifold& manifold, const Rational& mu) {
  const std::size_t m = manifold.dim();
  const std::size_t n = m + 1;
  JetSystem js;
  js.m = m;
  js.mu = mu;
  js.mu_m = Rational(-1, static_cast<long>(m - 1));
  js.mu_m.canonicalize();
  const TensorField rho_s = ricci(manifold).symmetric;
  js.a.assign(m, std::vector<ScalarExpr>(n * n, ScalarExpr::constant(m, 0)));
  for (std::size_t i = 0; i < m; ++i) {
    auto& a = js.a[i];
    a[i + 1] = ScalarExpr::constant(m, 1);
    for (std::size_t j = 0; j < m; ++j) {
      a[(j + 1) * n] = rho_s(i, j).scaled(mu);
      for (std::size_t k = 0; k < m; ++k) a[(j + 1) * n + k + 1] = manifold.christoffel(i, j, k);
    }
  }
  return js;
}

namespace {

bool row_is_zero(const std::vector<ScalarExpr>& row) {
  for (const auto& e : row) {
    if (e.is_zero_literal()) continue;
    if (e.rational_only()) return false;
    if (!holds(is_identically_zero(e))) return false;
  }
  return true;
}

// row * A_i
std::vector<ScalarExpr> times_a(const JetSystem& js, std::size_t i, const std::vector<ScalarExpr>& row) {
  const std::size_t n = js.size();
  std::vector<ScalarExpr> out(n, ScalarExpr::constant(js.m, 0));
  for (std::size_t r = 0; r < n; ++r) {
    if (row[r].is_zero_literal()) continue;
    for (std::size_t c = 0; c < n; ++c) {
      const auto& e = js.entry(i, r, c);
      if (e.is_zero_literal()) continue;
      out[c] += row[r] * e;
    }
  }
  return out;
}

}  // namespace

ConstraintStack integrability_constraints(const JetSystem& js) {
  const std::size_t n = js.size();
  ConstraintStack stack;
  for (std::size_t i = 0; i < js.m; ++i)
    for (std::size_t j = i + 1; j < js.m; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        std::vector<ScalarExpr> row(n, ScalarExpr::constant(js.m, 0));
        for (std::size_t c = 0; c < n; ++c) {
          ScalarExpr v = js.entry(j, r, c).differentiate(i) - js.entry(i, r, c).differentiate(j);
          for (std::size_t q = 0; q < n; ++q) {
            v += js.entry(j, r, q) * js.entry(i, q, c) - js.entry(i, r, q) * js.entry(j, q, c);
          }
          row[c] = v;
        }
        if (!row_is_zero(row)) stack.rows.push_back({std::move(row), 0});
      }
    }
  return stack;
}

ConstraintStack prolong(const JetSystem& js, const ConstraintStack& stack) {
  ConstraintStack out = stack;
  const int newest = stack.last_generation();
  if (newest < 0) return out;
  for (const auto& row : stack.rows) {
    if (row.generation != newest) continue;
    for (std::size_t i = 0; i < js.m; ++i) {
      auto next = times_a(js, i, row.c);
      for (std::size_t c = 0; c < next.size(); ++c) next[c] += row.c[c].differentiate(i);
      if (!row_is_zero(next)) out.rows.push_back({std::move(next), newest + 1});
    }
  }
  return out;
}

std::vector<Rational> default_basepoint(const AffineManifold& manifold) {
  std::vector<Rational> p(manifold.dim(), Rational(0));
  if (!manifold.on_excluded_locus(std::span<const Rational>(p))) return p;
  p[0] = 1;
  if (!manifold.on_excluded_locus(std::span<const Rational>(p))) return p;
  throw DomainError("no default basepoint off the excluded locus; pass one explicitly");
}

namespace {

// Drops incoming rows that are constant-coefficient combinations of rows already kept.
// Such rows, and all their prolongations, add nothing to the stack.
class ExactPruner {
 public:
  ExactPruner(const AffineManifold& manifold, int samples) : n_(manifold.dim() + 1) {
    Sampler sampler(0x243f6a8885a308d3ULL);
    const std::size_t m = manifold.dim();
    while (static_cast<int>(points_.size()) < samples) {
      ExactPoint p(m);
      for (auto& x : p) {
        const long num = static_cast<long>(sampler.next() % 29) + 1;
        const long den = static_cast<long>(sampler.next() % 7) + 1;
        x = Rational(num, den);
        x.canonicalize();
      }
      if (!manifold.on_excluded_locus(std::span<const Rational>(p))) points_.push_back(std::move(p));
    }
  }

  // True when the row should be kept.
  bool accept(const std::vector<ScalarExpr>& row) {
    std::vector<Rational> s;
    s.reserve(points_.size() * n_);
    for (const auto& p : points_)
      for (const auto& e : row) s.push_back(e.evaluate(p));
    std::vector<Rational> comb(kept_.size() + 1, Rational(0));
    comb.back() = 1;
    for (const auto& b : basis_) {
      const Rational& v = s[b.pivot];
      if (v == 0) continue;
      const Rational f = v / b.values[b.pivot];
      for (std::size_t t = 0; t < s.size(); ++t) {
        if (b.values[t] != 0) s[t] -= f * b.values[t];
      }
      for (std::size_t t = 0; t < b.comb.size(); ++t) {
        if (b.comb[t] != 0) comb[t] -= f * b.comb[t];
      }
    }
    auto pivot = std::find_if(s.begin(), s.end(), [](const Rational& r) { return r != 0; });
    if (pivot != s.end()) {
      const auto index = static_cast<std::size_t>(pivot - s.begin());
      basis_.push_back({std::move(s), std::move(comb), index});
      kept_.push_back(row);
      return true;
    }
    // 0 = row + sum comb[t] kept[t] at every sample; confirm symbolically.
    for (std::size_t c = 0; c < n_; ++c) {
      ScalarExpr r = row[c];
      for (std::size_t t = 0; t < kept_.size(); ++t) {
        if (comb[t] != 0) r += kept_[t][c].scaled(comb[t]);
      }
      if (!r.is_zero_literal()) {
        kept_.push_back(row);
        return true;  // coincidence on the samples; keep the row without a basis entry
      }
    }
    return false;
  }

 private:
  struct BasisRow {
    std::vector<Rational> values;
    std::vector<Rational> comb;  // values = sum comb[t] * signature(kept[t])
    std::size_t pivot;
  };

  std::size_t n_;
  std::vector<ExactPoint> points_;
  std::vector<BasisRow> basis_;
  std::vector<std::vector<ScalarExpr>> kept_;
};

class FloatPruner {
 public:
  FloatPruner(const AffineManifold& manifold, int samples) : n_(manifold.dim() + 1) {
    Sampler sampler(0x243f6a8885a308d3ULL);
    int attempts = 0;
    while (static_cast<int>(points_.size()) < 2 * samples && attempts++ < 1000) {
      FloatPoint p = sampler.random_float_point(manifold.dim(), 0.25, 1.25);
      if (!manifold.on_excluded_locus(std::span<const double>(p), 1e-6)) points_.push_back(std::move(p));
    }
    half_ = points_.size() / 2;
  }

  bool accept(const std::vector<ScalarExpr>& row) {
    std::vector<double> sig;
    try {
      sig = signature(row);
    } catch (const DomainError&) {
      kept_.push_back({});
      return true;
    }
    const std::size_t len = half_ * n_;
    if (!kept_sigs_.empty()) {
      Eigen::MatrixXd a(len, kept_sigs_.size());
      Eigen::VectorXd b(len);
      for (std::size_t t = 0; t < kept_sigs_.size(); ++t)
        for (std::size_t r = 0; r < len; ++r) a(r, t) = kept_sigs_[t][r];
      for (std::size_t r = 0; r < len; ++r) b(r) = sig[r];
      const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
      // Check the fit on the held-out half of the samples as well.
      double residual = 0.0, scale = 0.0;
      for (std::size_t r = 0; r < sig.size(); ++r) {
        double fit = 0.0;
        for (std::size_t t = 0; t < kept_sigs_.size(); ++t) fit += x(t) * kept_sigs_[t][r];
        residual = std::max(residual, std::abs(fit - sig[r]));
        scale = std::max(scale, std::abs(sig[r]));
      }
      if (residual <= 1e-9 * std::max(1.0, scale)) return false;
    }
    kept_sigs_.push_back(std::move(sig));
    kept_.push_back(row);
    return true;
  }

 private:
  std::vector<double> signature(const std::vector<ScalarExpr>& row) const {
    std::vector<double> s;
    for (const auto& p : points_)
      for (const auto& e : row) {
        const double v = e.evaluate(std::span<const double>(p));
        if (!std::isfinite(v)) throw DomainError("non-finite sample");
        s.push_back(v);
      }
    return s;
  }

  std::size_t n_;
  std::size_t half_ = 0;
  std::vector<FloatPoint> points_;
  std::vector<std::vector<double>> kept_sigs_;
  std::vector<std::vector<ScalarExpr>> kept_;
};

}  // namespace

SolutionSpace solution_dimension(const AffineManifold& manifold, const Rational& mu, std::span<const Rational> basepoint,
                                 const SolverOptions& options) {
  const std::size_t m = manifold.dim();
  const std::size_t n = m + 1;
  if (basepoint.size() != m) throw PreconditionError("basepoint has the wrong number of coordinates");
  if (manifold.on_excluded_locus(basepoint)) throw DomainError("basepoint lies on the excluded locus");

  const JetSystem js = build_jet_system(manifold, mu);
  SolutionSpace space;
  space.basepoint.assign(basepoint.begin(), basepoint.end());
  space.mu = mu;
  space.numeric = !js.rational_only();
  const int depth_cap = options.depth_cap >= 0 ? options.depth_cap : static_cast<int>(2 * m + 6);

  std::optional<ExactPruner> exact_pruner;
  std::optional<FloatPruner> float_pruner;
  if (space.numeric) {
    float_pruner.emplace(manifold, options.prune_samples);
  } else {
    exact_pruner.emplace(manifold, options.prune_samples);
  }
  const FloatPoint float_point = [&] {
    FloatPoint p;
    for (const auto& x : basepoint) p.push_back(to_double(x));
    return p;
  }();

  RationalMatrix exact_rows(0, n);
  std::vector<std::vector<double>> float_rows;
  auto rank_now = [&]() -> std::size_t {
    if (space.numeric) return float_rows.empty() ? 0 : float_rank(float_rows, n, options.float_threshold);
    return exact_rows.rows() == 0 ? 0 : exact_rank(exact_rows);
  };

  // Filters one generation through the pruner and records the survivors at P.
  auto absorb = [&](ConstraintStack candidates) {
    ConstraintStack kept;
    for (auto& row : candidates.rows) {
      const bool keep = space.numeric ? float_pruner->accept(row.c) : exact_pruner->accept(row.c);
      if (!keep) continue;
      if (space.numeric) {
        std::vector<double> v;
        for (const auto& e : row.c) v.push_back(e.evaluate_float(basepoint));
        float_rows.push_back(std::move(v));
      } else {
        std::vector<Rational> v;
        for (const auto& e : row.c) v.push_back(e.evaluate(basepoint));
        exact_rows.append_row(v);
      }
      kept.rows.push_back(std::move(row));
    }
    return kept;
  };

  ConstraintStack current = absorb(integrability_constraints(js));
  space.rank_history.push_back(rank_now());
  for (int generation = 0;; ++generation) {
    const auto& h = space.rank_history;
    if (h.back() == n) {
      space.stabilized = true;
      break;
    }
    if (current.rows.empty()) {
      space.stabilized = true;
      space.closed = true;
      break;
    }
    if (h.size() >= 3 && h[h.size() - 1] == h[h.size() - 2] && h[h.size() - 2] == h[h.size() - 3]) {
      space.stabilized = true;
      break;
    }
    if (generation >= depth_cap) break;
    ConstraintStack next = prolong(js, current);
    next.rows.erase(next.rows.begin(), next.rows.begin() + static_cast<std::ptrdiff_t>(current.rows.size()));
    current = absorb(std::move(next));
    space.rank_history.push_back(rank_now());
  }

  space.dim = n - space.rank_history.back();
  if (space.numeric) {
    space.float_basis = float_rows.empty() ? std::vector<std::vector<double>>{} : float_kernel(float_rows, n, options.float_threshold);
    if (float_rows.empty()) {
      for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        space.float_basis.push_back(e);
      }
    }
    for (const auto& v : space.float_basis) {
      std::vector<Rational> r;
      for (double x : v) r.emplace_back(x);
      space.basis.push_back(std::move(r));
    }
  } else {
    space.basis = exact_kernel(exact_rows.rows() == 0 ? RationalMatrix(1, n) : exact_rows);
    for (const auto& v : space.basis) {
      std::vector<double> d;
      for (const auto& x : v) d.push_back(to_double(x));
      space.float_basis.push_back(std::move(d));
    }
  }
  return space;
}

SolutionSpace solution_dimension(const AffineManifold& manifold, const Rational& mu) {
  const auto p = default_basepoint(manifold);
  return solution_dimension(manifold, mu, p);
}

std::string solution_report_json(const SolutionSpace& space, int indent) {
  nlohmann::ordered_json doc;
  doc["mu"] = to_string(space.mu);
  auto& bp = doc["basepoint"] = nlohmann::ordered_json::array();
  for (const auto& x : space.basepoint) bp.push_back(to_string(x));
  doc["dim"] = space.dim;
  doc["rank_history"] = space.rank_history;
  doc["stabilized"] = space.stabilized;
  auto& basis = doc["basis_jets"] = nlohmann::ordered_json::array();
  for (const auto& v : space.basis) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& x : v) row.push_back(to_string(x));
    basis.push_back(row);
  }
  if (space.numeric) doc["numeric"] = true;
  return doc.dump(indent);
}

JetTransport::JetTransport(const AffineManifold& manifold, const Rational& mu, int steps_per_segment)
    : system_(build_jet_system(manifold, mu)), excluded_(manifold.excluded()), steps_(steps_per_segment) {
  if (steps_ < 1) throw PreconditionError("transport needs at least one step per segment");
}

void JetTransport::evaluate(std::span<const double> x, std::vector<double>& out) const {
  const std::size_t n = system_.size();
  out.assign(system_.m * n * n, 0.0);
  for (std::size_t i = 0; i < system_.m; ++i)
    for (std::size_t e = 0; e < n * n; ++e) {
      const auto& expr = system_.a[i][e];
      if (!expr.is_zero_literal()) out[i * n * n + e] = expr.evaluate(x);
    }
}

void JetTransport::directional(std::span<const double> x, std::span<const double> v, std::vector<double>& out) const {
  const std::size_t n = system_.size();
  out.assign(n * n, 0.0);
  for (std::size_t i = 0; i < system_.m; ++i) {
    if (v[i] == 0.0) continue;
    for (std::size_t e = 0; e < n * n; ++e) {
      const auto& expr = system_.a[i][e];
      if (!expr.is_zero_literal()) out[e] += v[i] * expr.evaluate(x);
    }
  }
}

void JetTransport::check_segment(std::span<const double> a, std::span<const double> b) const {
  if (excluded_.empty()) return;
  const std::size_t m = system_.m;
  FloatPoint x(m);
  std::vector<double> start;
  for (const auto& e : excluded_) start.push_back(e.evaluate(a));
  for (int s = 0; s <= steps_; ++s) {
    const double t = static_cast<double>(s) / steps_;
    for (std::size_t i = 0; i < m; ++i) x[i] = a[i] + t * (b[i] - a[i]);
    for (std::size_t q = 0; q < excluded_.size(); ++q) {
      const double v = excluded_[q].evaluate(std::span<const double>(x));
      if (!std::isfinite(v) || std::abs(v) < 1e-12 || (v > 0) != (start[q] > 0)) {
        throw DomainError("path meets the excluded locus");
      }
    }
  }
}

std::vector<double> JetTransport::transport(std::span<const FloatPoint> path, std::span<const double> u0) const {
  const std::size_t m = system_.m;
  const std::size_t n = system_.size();
  if (u0.size() != n) throw PreconditionError("jet has the wrong length");
  for (const auto& p : path)
    if (p.size() != m) throw PreconditionError("path point has the wrong number of coordinates");
  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), m0, mh, m1;
  FloatPoint x(m), v(m);
  auto apply = [n](const std::vector<double>& a, const std::vector<double>& w, std::vector<double>& out) {
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += a[r * n + c] * w[c];
      out[r] = s;
    }
  };
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const auto& a = path[seg];
    const auto& b = path[seg + 1];
    check_segment(a, b);
    for (std::size_t i = 0; i < m; ++i) v[i] = b[i] - a[i];
    const double h = 1.0 / steps_;
    auto at = [&](double t, std::vector<double>& out) {
      for (std::size_t i = 0; i < m; ++i) x[i] = a[i] + t * v[i];
      directional(x, v, out);
    };
    at(0.0, m0);
    for (int s = 0; s < steps_; ++s) {
      const double t = s * h;
      at(t + 0.5 * h, mh);
      at(t + h, m1);
      apply(m0, u, k1);
      for (std::size_t r = 0; r < n; ++r) tmp[r] = u[r] + 0.5 * h * k1[r];
      apply(mh, tmp, k2);
      for (std::size_t r = 0; r < n; ++r) tmp[r] = u[r] + 0.5 * h * k2[r];
      apply(mh, tmp, k3);
      for (std::size_t r = 0; r < n; ++r) tmp[r] = u[r] + h * k3[r];
      apply(m1, tmp, k4);
      for (std::size_t r = 0; r < n; ++r) u[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
      std::swap(m0, m1);
    }
    for (double c : u)
      if (!std::isfinite(c)) throw DomainError("jet transport produced non-finite values");
  }
  return u;
}

double JetTransport::holonomy_defect(std::span<const FloatPoint> loop, std::span<const double> u0) const {
  if (loop.size() < 2) throw PreconditionError("loop needs at least two points");
  for (std::size_t i = 0; i < loop.front().size(); ++i) {
    if (std::abs(loop.front()[i] - loop.back()[i]) > 1e-12) throw PreconditionError("loop is not closed");
  }
  const auto u = transport(loop, u0);
  double s = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r) s += (u[r] - u0[r]) * (u[r] - u0[r]);
  return std::sqrt(s);
}

std::vector<double> transport_jet(const AffineManifold& manifold, const Rational& mu, std::span<const FloatPoint> path,
                                  std::span<const double> u0, int steps_per_segment) {
  return JetTransport(manifold, mu, steps_per_segment).transport(path, u0);
}

double holonomy_defect(const AffineManifold& manifold, const Rational& mu, std::span<const FloatPoint> loop,
                       std::span<const double> u0, int steps_per_segment) {
  return JetTransport(manifold, mu, steps_per_segment).holonomy_defect(loop, u0);
}

}  // namespace aqe
