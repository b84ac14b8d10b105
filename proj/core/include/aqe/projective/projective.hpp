#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aqe/geometry/affine_manifold.hpp"
#include "aqe/geometry/tensor_field.hpp"
#include "aqe/solver/jet_system.hpp"

namespace aqe {

/// A 1-form omega defining the projectively equivalent connection
///   Gamma~_ij^k = Gamma_ij^k + delta_i^k omega_j + delta_j^k omega_i.
/// With a potential g, omega = dg and the change is strong.
struct ProjectiveChange {
  std::vector<ScalarExpr> omega;
  std::optional<ScalarExpr> potential;
  bool strong = false;

  /// Decides `strong` by testing d(omega) = 0.
  static ProjectiveChange from_form(std::vector<ScalarExpr> omega);
  static ProjectiveChange from_potential(const ScalarExpr& g);
};

/// Throws PreconditionError when the potential and the form disagree.
AffineManifold deform(const AffineManifold& m, const ProjectiveChange& change);
/// Shorthand for the strong change with potential g.
AffineManifold deform(const AffineManifold& m, const ScalarExpr& g);

/// Verdict that d_i omega_j - d_j omega_i vanishes for all i < j.
Verdict closedness(std::span<const ScalarExpr> omega);
bool is_strong(const ProjectiveChange& change);

/// rho_s(deform(M, dg)) - rho_s(M) + (m-1)(Hess g - dg (x) dg); zero for every g.
TensorField ricci_transform_residual(const AffineManifold& m, const ScalarExpr& g);

struct LiouvilleReport {
  Verdict ricci_preserved;    // rho_s unchanged by deform(M, dg)
  Verdict hessian_condition;  // Hess g - dg (x) dg = 0, equivalently exp(-g) in E(0)
  bool agree() const { return holds(ricci_preserved) == holds(hessian_condition); }
};
LiouvilleReport liouville_check(const AffineManifold& m, const ScalarExpr& g);

struct StrongFlatnessReport {
  bool strongly_flat = false;  // dim E(mu_m) = m + 1
  SolutionSpace space;
  std::optional<bool> symmetric_criterion;  // surfaces: rho and nabla rho totally symmetric
  bool criteria_agree() const { return !symmetric_criterion || *symmetric_criterion == strongly_flat; }
};
StrongFlatnessReport strong_flatness_test(const AffineManifold& m, std::span<const Rational> basepoint);

/// Coordinates z^i = phi_i / phi_0 built from the solutions with Theta(phi_i) = e_i.
struct FlatChart {
  FloatPoint basepoint;
  std::vector<std::vector<Rational>> basis;  // initial jets, the standard basis
  double radius = 0.0;                       // size of the sampled region around P
  std::vector<FloatPoint> points;
  std::vector<FloatPoint> z;
  std::vector<std::vector<double>> jacobian;  // dz at each grid point, row-major m x m
};

/// Grid of (2k+1)^m points spaced radius/k around P.
std::vector<FloatPoint> square_grid(std::span<const double> center, double radius, int k);
/// A quarter of the distance from P to the excluded locus along the coordinate axes (at most 1/2).
double default_chart_radius(const AffineManifold& m, std::span<const double> basepoint);

/// Requires dim E(P, mu_m) = m + 1; throws PreconditionError otherwise, DomainError when phi_0
/// vanishes on the grid.
FlatChart flat_chart(const AffineManifold& m, std::span<const Rational> basepoint, std::span<const FloatPoint> grid,
                     double radius = 0.0);
std::string flat_chart_json(const FlatChart& chart, int indent = 2);

/// Integrates random geodesics from P, maps them through z, and returns the largest distance of an
/// image point from the chord of its geodesic, relative to the chord length.
double geodesic_straightness(const AffineManifold& m, const FlatChart& chart, int n_geodesics, std::uint64_t seed = 1);

struct GaugeResult {
  AffineManifold deformed;
  TensorField rho_s;
  Verdict residual;
};
/// Requires exp(-g) in E(mu_m); returns deform(M, dg) with its symmetric Ricci tensor.
GaugeResult ricci_flat_gauge(const AffineManifold& m, const ScalarExpr& g);

/// Float variant for a solution f known only through its jet u0 at P (f(P) > 0): values of
/// f, df at each sample come from jet transport along P -> q, second derivatives from the
/// equation, and rho_s of the connection deformed by g = -log f is assembled pointwise.
/// Returns the largest absolute component over the samples.
double ricci_flat_gauge_residual(const AffineManifold& m, std::span<const double> basepoint,
                                 std::span<const double> u0, std::span<const FloatPoint> samples);

}  // namespace aqe
