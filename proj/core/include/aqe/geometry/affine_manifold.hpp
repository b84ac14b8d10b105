#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "aqe/expr/scalar_expr.hpp"

namespace aqe {

/// Torsion-free connection on a coordinate chart, given by its Christoffel symbols
/// Gamma_ij^k with nabla_{d_i} d_j = Gamma_ij^k d_k. Points where any `excluded`
/// expression vanishes are removed from the chart.
class AffineManifold {
 public:
  using Index3 = std::tuple<std::size_t, std::size_t, std::size_t>;

  /// `gamma` holds m^3 entries at offset (i*m + j)*m + k. Throws InvalidManifold when m < 2,
  /// when sizes disagree, or when Gamma_ij^k != Gamma_ji^k.
  AffineManifold(std::vector<std::string> coords, std::vector<ScalarExpr> gamma, std::vector<ScalarExpr> excluded = {});

  /// Builds from the listed symbols (0-based (i, j, k)); the partner Gamma_ji^k is filled in.
  static AffineManifold from_symbols(std::vector<std::string> coords, const std::map<Index3, ScalarExpr>& symbols,
                                     std::vector<ScalarExpr> excluded = {});
  static AffineManifold flat(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  const ScalarExpr& christoffel(std::size_t i, std::size_t j, std::size_t k) const {
    return gamma_[(i * dim() + j) * dim() + k];
  }
  const std::vector<ScalarExpr>& christoffel_grid() const noexcept { return gamma_; }
  const std::vector<ScalarExpr>& excluded() const noexcept { return excluded_; }
  bool rational_only() const noexcept;

  /// True when some excluded expression vanishes (or has a pole) at the point.
  bool on_excluded_locus(std::span<const Rational> point) const;
  /// Float variant with an absolute tolerance on the excluded expressions.
  bool on_excluded_locus(std::span<const double> point, double tolerance = 1e-12) const;

  std::string symbol_to_string(std::size_t i, std::size_t j, std::size_t k) const;

 private:
  std::vector<std::string> coords_;
  std::vector<ScalarExpr> gamma_;
  std::vector<ScalarExpr> excluded_;
};

/// Parses a manifold document:
///   {"dim": m, "coords": [...], "christoffel": {"i,j^k": "<expr>"}, "excluded": ["<expr>", ...]}
/// Keys are 1-based; omitted symbols are zero. A key and its mirror "j,i^k" may both appear
/// only when they agree.
AffineManifold load_manifold(std::string_view json_text);
AffineManifold load_manifold_file(const std::filesystem::path& path);
/// Writes the document form, listing each nonzero symbol once with i <= j.
std::string manifold_to_json(const AffineManifold& m);

}  // namespace aqe
