#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aqe/geometry/affine_manifold.hpp"

namespace aqe {

/// First-order system d_i u = A_i u for the jet u = (f, d_1 f, ..., d_m f) of a solution of
/// Hess f = mu f rho_s, i.e. d_i d_j f = Gamma_ij^k d_k f + mu rho_s,ij f.
struct JetSystem {
  std::size_t m = 0;
  Rational mu;
  Rational mu_m;  // -1/(m-1)
  std::vector<std::vector<ScalarExpr>> a;  // a[i] is the (m+1)x(m+1) matrix A_i, row-major

  std::size_t size() const noexcept { return m + 1; }
  const ScalarExpr& entry(std::size_t i, std::size_t row, std::size_t col) const { return a[i][row * size() + col]; }
  bool rational_only() const;
};

JetSystem build_jet_system(const AffineManifold& manifold, const Rational& mu);

/// Linear constraints c . u = 0 satisfied by every solution jet.
struct ConstraintStack {
  struct Row {
    std::vector<ScalarExpr> c;  // length m+1
    int generation = 0;
  };
  std::vector<Row> rows;

  int last_generation() const noexcept { return rows.empty() ? -1 : rows.back().generation; }
};

/// Rows of F_ij = d_i A_j - d_j A_i + A_j A_i - A_i A_j for i < j (generation 0). Rows that
/// vanish identically are dropped.
ConstraintStack integrability_constraints(const JetSystem& jets);

/// Appends d_i c + c A_i for every row c of the newest generation and every direction i.
/// Older rows were prolonged when they were newest, so the stack stays closed under the
/// operation. Identically zero rows are dropped.
ConstraintStack prolong(const JetSystem& jets, const ConstraintStack& stack);

/// Dimension of the germ space at a point, with a basis of admissible initial jets.
struct SolutionSpace {
  std::vector<Rational> basepoint;
  Rational mu;
  std::size_t dim = 0;
  std::vector<std::vector<Rational>> basis;  // exact kernel vectors (rounded in numeric mode)
  std::vector<std::vector<double>> float_basis;
  std::vector<std::size_t> rank_history;
  bool stabilized = false;
  bool numeric = false;  // exp/log entries forced floating-point rank
  bool closed = false;   // stack closed under prolongation (every new row was dependent)
};

struct SolverOptions {
  int depth_cap = -1;           // -1: 2m + 6
  int prune_samples = 8;        // sample points used to detect dependent rows
  double float_threshold = 1e-9;
};

/// Default basepoint: the origin unless it lies on the excluded locus, then (1, 0, ..., 0).
std::vector<Rational> default_basepoint(const AffineManifold& manifold);

/// Evaluates the constraint stack at P and prolongs until the rank settles: the rank reaches
/// m+1, or the last three ranks agree, or a generation contributes no independent row.
/// Throws DomainError when P lies on the excluded locus.
SolutionSpace solution_dimension(const AffineManifold& manifold, const Rational& mu, std::span<const Rational> basepoint,
                                 const SolverOptions& options = {});
SolutionSpace solution_dimension(const AffineManifold& manifold, const Rational& mu);

/// Report document {"mu", "basepoint", "dim", "rank_history", "stabilized", "basis_jets"}.
std::string solution_report_json(const SolutionSpace& space, int indent = 2);

/// Float evaluation of the system matrices along paths.
class JetTransport {
 public:
  JetTransport(const AffineManifold& manifold, const Rational& mu, int steps_per_segment = 1000);

  std::size_t dim() const noexcept { return system_.m; }
  const JetSystem& system() const noexcept { return system_; }

  /// Fills out[(i*(m+1) + r)*(m+1) + c] with A_i(x)[r][c].
  void evaluate(std::span<const double> x, std::vector<double>& out) const;
  /// The sum over i of v^i A_i(x), as an (m+1)x(m+1) row-major matrix.
  void directional(std::span<const double> x, std::span<const double> v, std::vector<double>& out) const;

  /// RK4 along the polyline with a fixed step count per segment. Throws DomainError when the
  /// path meets the excluded locus or the jet stops being finite.
  std::vector<double> transport(std::span<const FloatPoint> path, std::span<const double> u0) const;
  /// Euclidean norm of transport(loop, u0) - u0; the loop must be closed.
  double holonomy_defect(std::span<const FloatPoint> loop, std::span<const double> u0) const;

  /// Throws DomainError when the segment from a to b meets the excluded locus.
  void check_segment(std::span<const double> a, std::span<const double> b) const;

 private:
  JetSystem system_;
  std::vector<ScalarExpr> excluded_;
  int steps_;
};

std::vector<double> transport_jet(const AffineManifold& manifold, const Rational& mu, std::span<const FloatPoint> path,
                                  std::span<const double> u0, int steps_per_segment = 1000);
double holonomy_defect(const AffineManifold& manifold, const Rational& mu, std::span<const FloatPoint> loop,
                       std::span<const double> u0, int steps_per_segment = 1000);

}  // namespace aqe
