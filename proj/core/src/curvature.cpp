#include "aqe/geometry/curvature.hpp"

#include <algorithm>
#include <array>

#include "aqe/error.hpp"
#include "aqe/linalg/exact_matrix.hpp"

namespace aqe {

namespace {

// d_i Gamma_jk^l for all (i, j, k, l).
std::vector<ScalarExpr> christoffel_derivatives(const AffineManifold& m) {
  const std::size_t n = m.dim();
  std::vector<ScalarExpr> d(n * n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          auto v = m.christoffel(j, k, l).differentiate(i);
          d[((i * n + j) * n + k) * n + l] = v;
          d[((i * n + k) * n + j) * n + l] = v;
        }
  return d;
}

}  // namespace

TensorField curvature(const AffineManifold& m) {
  const std::size_t n = m.dim();
  const auto d = christoffel_derivatives(m);
  auto dg = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) -> const ScalarExpr& {
    return d[((i * n + j) * n + k) * n + l];
  };
  TensorField r(n, 3, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (j < i) {
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) r.at({i, j, k, l}) = -r.at({j, i, k, l});
        continue;
      }
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          ScalarExpr v = dg(i, j, k, l) - dg(j, i, k, l);
          for (std::size_t q = 0; q < n; ++q) {
            v += m.christoffel(i, q, l) * m.christoffel(j, k, q) - m.christoffel(j, q, l) * m.christoffel(i, k, q);
          }
          r.at({i, j, k, l}) = v;
        }
    }
  return r;
}

RicciParts ricci(const AffineManifold& m) {
  const std::size_t n = m.dim();
  TensorField rho(n, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      ScalarExpr v = ScalarExpr::constant(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        v += m.christoffel(j, k, i).differentiate(i) - m.christoffel(i, k, i).differentiate(j);
        for (std::size_t q = 0; q < n; ++q) {
          v += m.christoffel(i, q, i) * m.christoffel(j, k, q) - m.christoffel(j, q, i) * m.christoffel(i, k, q);
        }
      }
      rho(j, k) = v;
    }
  RicciParts parts{rho, TensorField(n, 2), TensorField(n, 2)};
  const Rational half(1, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      parts.symmetric(j, k) = (rho(j, k) + rho(k, j)).scaled(half);
      parts.antisymmetric(j, k) = (rho(j, k) - rho(k, j)).scaled(half);
    }
  return parts;
}

TensorField hessian(const AffineManifold& m, const ScalarExpr& f) {
  const std::size_t n = m.dim();
  if (f.nvars() != n) throw PreconditionError("function lives on a chart of the wrong dimension");
  std::vector<ScalarExpr> df;
  for (std::size_t k = 0; k < n; ++k) df.push_back(f.differentiate(k));
  TensorField h(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ScalarExpr v = df[j].differentiate(i);
      for (std::size_t k = 0; k < n; ++k) v -= m.christoffel(i, j, k) * df[k];
      h(i, j) = v;
    }
  return h;
}

TensorField covariant_derivative(const AffineManifold& m, const TensorField& t) {
  const std::size_t n = m.dim();
  if (t.dim() != n || t.covariant() != 2 || t.contravariant()) {
    throw PreconditionError("covariant_derivative expects a covariant 2-tensor");
  }
  TensorField r(n, 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr v = t(j, k).differentiate(i);
        for (std::size_t l = 0; l < n; ++l) {
          v -= m.christoffel(i, j, l) * t(l, k) + m.christoffel(i, k, l) * t(j, l);
        }
        r(i, j, k) = v;
      }
  return r;
}

TensorField nabla_ricci(const AffineManifold& m) { return covariant_derivative(m, ricci(m).rho); }

Verdict is_totally_symmetric(const TensorField& t) {
  if (t.contravariant() || (t.covariant() != 2 && t.covariant() != 3)) {
    throw PreconditionError("expected a covariant 2- or 3-tensor");
  }
  const std::size_t n = t.dim();
  Verdict v = Verdict::kZero;
  if (t.covariant() == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        v = combine(v, is_identically_zero(t(i, j) - t(j, i)));
        if (v == Verdict::kNonzero) return v;
      }
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        v = combine(v, is_identically_zero(t(i, j, k) - t(j, i, k)));
        v = combine(v, is_identically_zero(t(i, j, k) - t(i, k, j)));
        if (v == Verdict::kNonzero) return v;
      }
  return v;
}

TensorField apply_qe_operator(const AffineManifold& m, const Rational& mu, const ScalarExpr& f) {
  TensorField q = hessian(m, f);
  if (mu == 0) return q;
  const auto rs = ricci(m).symmetric;
  const ScalarExpr muf = f.scaled(mu);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) q(i, j) = q(i, j) - muf * rs(i, j);
  return q;
}

TensorField affine_killing_residual(const AffineManifold& m, std::span<const ScalarExpr> x) {
  const std::size_t n = m.dim();
  if (x.size() != n) throw PreconditionError("vector field has the wrong number of components");
  std::vector<ScalarExpr> dx(n * n);  // d_i X^l at i*n + l
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) dx[i * n + l] = x[l].differentiate(i);
  TensorField r(n, 2, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr v = dx[j * n + k].differentiate(i);
        for (std::size_t l = 0; l < n; ++l) {
          v += x[l] * m.christoffel(i, j, k).differentiate(l) + dx[i * n + l] * m.christoffel(l, j, k) +
               dx[j * n + l] * m.christoffel(i, l, k) - dx[l * n + k] * m.christoffel(i, j, l);
        }
        r(i, j, k) = v;
      }
  return r;
}

Verdict is_affine_killing(const AffineManifold& m, std::span<const ScalarExpr> x) {
  return affine_killing_residual(m, x).is_zero();
}

std::size_t rank_at(const TensorField& t, std::span<const Rational> point) {
  if (t.covariant() != 2 || t.contravariant()) throw PreconditionError("rank_at expects a covariant 2-tensor");
  RationalMatrix a(t.dim(), t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j) a(i, j) = t(i, j).evaluate(point);
  return exact_rank(a);
}

}  // namespace aqe
