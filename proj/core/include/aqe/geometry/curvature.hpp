#pragma once

#include <span>
#include <vector>

#include "aqe/geometry/affine_manifold.hpp"
#include "aqe/geometry/tensor_field.hpp"

namespace aqe {

/// R_ijk^l = d_i Gamma_jk^l - d_j Gamma_ik^l + Gamma_in^l Gamma_jk^n - Gamma_jn^l Gamma_ik^n,
/// stored at (i, j, k, l).
TensorField curvature(const AffineManifold& m);

struct RicciParts {
  TensorField rho;            // rho_jk = R_ijk^i
  TensorField symmetric;      // (rho_jk + rho_kj) / 2
  TensorField antisymmetric;  // (rho_jk - rho_kj) / 2
};

/// Ricci tensor via the traced formula, without building the full curvature tensor.
RicciParts ricci(const AffineManifold& m);

/// Hessian H_ij = d_i d_j f - Gamma_ij^k d_k f. Both triangles are computed independently.
TensorField hessian(const AffineManifold& m, const ScalarExpr& f);

/// Covariant derivative of a covariant 2-tensor: (nabla T)_{i;jk} stored at (i, j, k).
TensorField covariant_derivative(const AffineManifold& m, const TensorField& t);

/// nabla rho, with rho the full Ricci tensor.
TensorField nabla_ricci(const AffineManifold& m);

/// Whether a covariant 2- or 3-tensor is invariant under every permutation of its slots.
Verdict is_totally_symmetric(const TensorField& t);

/// Q_mu f = Hess f - mu f rho_s.
TensorField apply_qe_operator(const AffineManifold& m, const Rational& mu, const ScalarExpr& f);

/// Components of L_X nabla:
///   X^l d_l Gamma_ij^k + d_i X^l Gamma_lj^k + d_j X^l Gamma_il^k - d_l X^k Gamma_ij^l + d_i d_j X^k.
TensorField affine_killing_residual(const AffineManifold& m, std::span<const ScalarExpr> x);
Verdict is_affine_killing(const AffineManifold& m, std::span<const ScalarExpr> x);

/// Rank of a symmetric 2-tensor at a point (exact evaluation).
std::size_t rank_at(const TensorField& t, std::span<const Rational> point);

}  // namespace aqe
