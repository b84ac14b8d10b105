#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "aqe/geometry/affine_manifold.hpp"
#include "aqe/geometry/tensor_field.hpp"

namespace aqe {

/// Symmetric 2-tensor on a chart (x^1..x^m, y_1..y_m) of the cotangent bundle, n = 2m.
struct PseudoMetric {
  std::size_t n = 0;
  std::vector<std::string> coords;
  TensorField components;  // covariant 2-tensor on n coordinates
  bool block_extension = false;
  TensorField xx_block;  // Phi_ij - 2 y_k Gamma_ij^k when block_extension
  std::vector<ScalarExpr> excluded;

  const ScalarExpr& operator()(std::size_t a, std::size_t b) const { return components(a, b); }
};

/// g = dx^i (.) dy_i + (Phi_ij - 2 y_k Gamma_ij^k) dx^i dx^j. `phi` is a symmetric m x m grid
/// (row-major) over the base coordinates; an empty vector means Phi = 0.
PseudoMetric deformed_extension(const AffineManifold& m, const std::vector<ScalarExpr>& phi = {});

/// Inverse metric. Block extensions use [[0, I], [I, -B]]; other metrics go through
/// Gauss-Jordan elimination over expressions (DomainError if a pivot cannot be found).
TensorField inverse_metric(const PseudoMetric& g);

/// Levi-Civita connection, packaged as an affine manifold on the 2m coordinates.
AffineManifold levi_civita(const PseudoMetric& g);

/// d_k g_ij - Gamma_ki^l g_lj - Gamma_kj^l g_il, stored at (k, i, j).
TensorField metric_compatibility_residual(const PseudoMetric& g, const AffineManifold& connection);

struct ExtensionResiduals {
  TensorField hessian_defect;  // Hess_g(pi* f) - pi*(Hess f)
  TensorField ricci_defect;    // rho_g - 2 pi* rho_s
  ScalarExpr null_gradient;    // |d pi* f|^2_g
  Verdict verdict() const;
};
ExtensionResiduals extension_identities_residuals(const AffineManifold& m, const std::vector<ScalarExpr>& phi,
                                                  const ScalarExpr& f);

/// H_g Psi + rho_g - mu dPsi (x) dPsi - lambda g. `connection` must be levi_civita(g).
TensorField quasi_einstein_residual(const PseudoMetric& g, const AffineManifold& connection, const ScalarExpr& psi,
                                    const Rational& mu, const Rational& lambda = 0);
TensorField quasi_einstein_residual(const PseudoMetric& g, const ScalarExpr& psi, const Rational& mu,
                                    const Rational& lambda = 0);

/// For f in E(mu_a) on the base: the potential Psi = pi*(-(2/mu_a) log f) and the exponent
/// mu_a / 2 for which (g, Psi) is quasi-Einstein with lambda = 0.
std::pair<ScalarExpr, Rational> quasi_einstein_potential(const ScalarExpr& f, const Rational& mu_affine);

/// Base-side form of the same condition: Hess psi + 2 rho_s - mu dpsi (x) dpsi.
TensorField affine_quasi_einstein_residual(const AffineManifold& m, const ScalarExpr& psi, const Rational& mu);

}  // namespace aqe
