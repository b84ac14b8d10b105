#include "aqe/extension/riemannian_extension.hpp"

#include "aqe/error.hpp"
#include "aqe/geometry/curvature.hpp"

namespace aqe {

namespace {

TensorField pullback(const TensorField& t, std::size_t n) {
  const std::size_t m = t.dim();
  TensorField r(n, 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r(i, j) = t(i, j).lifted(n);
  return r;
}

}  // namespace

PseudoMetric deformed_extension(const AffineManifold& m, const std::vector<ScalarExpr>& phi) {
  const std::size_t d = m.dim();
  const std::size_t n = 2 * d;
  if (n > kMaxVars) throw PreconditionError("base manifold too large for its cotangent chart");
  if (!phi.empty()) {
    if (phi.size() != d * d) throw PreconditionError("Phi must be an m x m grid");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        if (!holds(is_identically_zero(phi[i * d + j] - phi[j * d + i]))) throw PreconditionError("Phi is not symmetric");
      }
  }
  PseudoMetric g;
  g.n = n;
  g.coords = m.coords();
  for (std::size_t i = 0; i < d; ++i) g.coords.push_back("y" + std::to_string(i + 1));
  g.components = TensorField(n, 2);
  g.xx_block = TensorField(n, 2);  // only the leading d x d block is used
  g.block_extension = true;
  for (const auto& e : m.excluded()) g.excluded.push_back(e.lifted(n));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ScalarExpr b = phi.empty() ? ScalarExpr::constant(n, 0) : phi[i * d + j].lifted(n);
      for (std::size_t k = 0; k < d; ++k) {
        const auto& gamma = m.christoffel(i, j, k);
        if (gamma.is_zero_literal()) continue;
        b -= (ScalarExpr::coordinate(n, d + k) * gamma.lifted(n)).scaled(2);
      }
      g.components(i, j) = b;
      g.xx_block(i, j) = b;
    }
  for (std::size_t i = 0; i < d; ++i) {
    g.components(i, d + i) = ScalarExpr::constant(n, 1);
    g.components(d + i, i) = ScalarExpr::constant(n, 1);
  }
  return g;
}

TensorField inverse_metric(const PseudoMetric& g) {
  const std::size_t n = g.n;
  TensorField inv(n, 2);
  if (g.block_extension) {
    const std::size_t d = n / 2;
    for (std::size_t i = 0; i < d; ++i) {
      inv(i, d + i) = ScalarExpr::constant(n, 1);
      inv(d + i, i) = ScalarExpr::constant(n, 1);
      for (std::size_t j = 0; j < d; ++j) inv(d + i, d + j) = -g.xx_block(i, j);
    }
    return inv;
  }
  std::vector<std::vector<ScalarExpr>> a(n, std::vector<ScalarExpr>(2 * n, ScalarExpr::constant(n, 0)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = g(r, c);
    a[r][n + r] = ScalarExpr::constant(n, 1);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && holds(is_identically_zero(a[pivot][c]))) ++pivot;
    if (pivot == n) throw DomainError("metric is degenerate");
    std::swap(a[pivot], a[c]);
    const ScalarExpr p = a[c][c];
    for (auto& e : a[c]) e = e / p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero_literal()) continue;
      const ScalarExpr factor = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) {
        if (!a[c][k].is_zero_literal()) a[r][k] -= factor * a[c][k];
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = a[r][n + c];
  return inv;
}

AffineManifold levi_civita(const PseudoMetric& g) {
  const std::size_t n = g.n;
  const TensorField inv = inverse_metric(g);
  // dg[(l*n + i)*n + j] = d_l g_ij
  std::vector<ScalarExpr> dg(n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dg[(l * n + i) * n + j] = g(i, j).differentiate(l);
  auto d = [&](std::size_t l, std::size_t i, std::size_t j) -> const ScalarExpr& { return dg[(l * n + i) * n + j]; };
  std::vector<ScalarExpr> gamma(n * n * n, ScalarExpr::constant(n, 0));
  const Rational half(1, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      // First-kind symbols [ij, l].
      std::vector<ScalarExpr> first(n);
      for (std::size_t l = 0; l < n; ++l) first[l] = d(i, j, l) + d(j, i, l) - d(l, i, j);
      for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr v = ScalarExpr::constant(n, 0);
        for (std::size_t l = 0; l < n; ++l) {
          if (inv(k, l).is_zero_literal() || first[l].is_zero_literal()) continue;
          v += inv(k, l) * first[l];
        }
        v = v.scaled(half);
        gamma[(i * n + j) * n + k] = v;
        gamma[(j * n + i) * n + k] = v;
      }
    }
  return AffineManifold(g.coords, std::move(gamma), g.excluded);
}

TensorField metric_compatibility_residual(const PseudoMetric& g, const AffineManifold& connection) {
  const std::size_t n = g.n;
  TensorField r(n, 3);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ScalarExpr v = g(i, j).differentiate(k);
        for (std::size_t l = 0; l < n; ++l) {
          v -= connection.christoffel(k, i, l) * g(l, j) + connection.christoffel(k, j, l) * g(i, l);
        }
        r(k, i, j) = v;
      }
  return r;
}

Verdict ExtensionResiduals::verdict() const {
  return combine(combine(hessian_defect.is_zero(), ricci_defect.is_zero()), is_identically_zero(null_gradient));
}

ExtensionResiduals extension_identities_residuals(const AffineManifold& m, const std::vector<ScalarExpr>& phi,
                                                  const ScalarExpr& f) {
  const std::size_t n = 2 * m.dim();
  const PseudoMetric g = deformed_extension(m, phi);
  const AffineManifold lc = levi_civita(g);
  const ScalarExpr pf = f.lifted(n);
  ExtensionResiduals out;
  out.hessian_defect = hessian(lc, pf) - pullback(hessian(m, f), n);
  out.ricci_defect = ricci(lc).rho - pullback(ricci(m).symmetric, n).scaled(ScalarExpr::constant(n, 2));
  const TensorField inv = inverse_metric(g);
  ScalarExpr norm = ScalarExpr::constant(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (inv(a, b).is_zero_literal()) continue;
      norm += inv(a, b) * pf.differentiate(a) * pf.differentiate(b);
    }
  out.null_gradient = norm;
  return out;
}

TensorField quasi_einstein_residual(const PseudoMetric& g, const AffineManifold& connection, const ScalarExpr& psi,
                                    const Rational& mu, const Rational& lambda) {
  const std::size_t n = g.n;
  TensorField r = hessian(connection, psi) + ricci(connection).rho;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (mu != 0) r(a, b) -= (psi.differentiate(a) * psi.differentiate(b)).scaled(mu);
      if (lambda != 0) r(a, b) -= g(a, b).scaled(lambda);
    }
  return r;
}

TensorField quasi_einstein_residual(const PseudoMetric& g, const ScalarExpr& psi, const Rational& mu,
                                    const Rational& lambda) {
  return quasi_einstein_residual(g, levi_civita(g), psi, mu, lambda);
}

std::pair<ScalarExpr, Rational> quasi_einstein_potential(const ScalarExpr& f, const Rational& mu_affine) {
  if (mu_affine == 0) throw PreconditionError("the potential needs a nonzero eigenvalue");
  const Rational scale = Rational(-2) / mu_affine;
  return {ScalarExpr::log(f).scaled(scale), mu_affine / 2};
}

TensorField affine_quasi_einstein_residual(const AffineManifold& m, const ScalarExpr& psi, const Rational& mu) {
  const std::size_t d = m.dim();
  TensorField r = hessian(m, psi);
  const TensorField rs = ricci(m).symmetric;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      r(i, j) += rs(i, j).scaled(2);
      if (mu != 0) r(i, j) -= (psi.differentiate(i) * psi.differentiate(j)).scaled(mu);
    }
  return r;
}

}  // namespace aqe
