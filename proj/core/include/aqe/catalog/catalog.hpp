#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aqe/expr/zero_test.hpp"
#include "aqe/geometry/affine_manifold.hpp"
#include "aqe/solver/jet_system.hpp"

namespace aqe::catalog {

enum class Family { kTypeA, kTypeB, kExampleB1, kExampleB2, kExampleEA2, kExampleEA3, kTC2, kTC3 };

/// Parses "typeA", "typeB", "exampleB1", "exampleB2", "exampleEA2", "exampleEA3", "tc2", "tc3".
Family parse_family(const std::string& name);
std::string family_name(Family family);
/// Number of coordinates of the family's models.
std::size_t family_dimension(Family family);

/// A model of one of the catalog families.
///
/// Parameters are keyed "i,j^k" (1-based) for the constants Gamma_ij^k (Type A) or C_ij^k
/// (Type B); exampleB2 uses "x", "y", "z", "w". Families fixed by a normal form take only the
/// free constants:
///   exampleEA2  Gamma_11^1 = 1, Gamma_12^1 = Gamma_22^1 = 0; free 1,1^2  1,2^2  2,2^2
///   exampleEA3  Gamma_11^1 = Gamma_12^1 = Gamma_22^1 = 0;    free 1,1^2  1,2^2  2,2^2
///   tc2 1a  C_22^1 = 0, C_22^2 = C_12^1;                            free 1,1^1 1,1^2 1,2^1 1,2^2
///   tc2 1b  C_22^1 = s, C_12^1 = 0, C_22^2 = 2s C_11^2,
///           C_11^1 = 1 + 2 C_12^2 + s (C_11^2)^2;                   free 1,1^2 1,2^2
///   tc2 2a  C_12^1 = C_22^1 = C_22^2 = 0;                            free 1,1^1 1,1^2 1,2^2
///   tc2 2b  C_11^1 = 1 + 2 C_12^2, C_11^2 = C_12^1 = C_22^2 = 0, C_22^1 = s;  free 1,2^2
///   tc3 1   C_22^1 = s, C_12^1 = 0, C_22^2 = 2s C_11^2;               free 1,1^1 1,1^2 1,2^2
///   tc3 2a  C_11^1 = C_12^2 - 1, C_11^2 = C_12^1 = C_22^2 = 0, C_22^1 = s;   free 1,2^2
///   tc3 2b  C_11^1 = -(5 + 16 s b^2)/2, C_12^2 = -(3 + 8 s b^2)/2, C_12^1 = 0,
///           C_22^1 = s, C_22^2 = 2 s b with b = C_11^2;              free 1,1^2
/// with s = `sign` (+1 or -1).
struct ModelSpec {
  Family family = Family::kTypeA;
  std::string variant;
  int sign = 1;
  std::map<std::string, Rational> params;

  std::string describe() const;
};

/// Throws PreconditionError for missing, unknown or malformed parameters.
AffineManifold build_model(const ModelSpec& spec);

/// Full constant tables (Gamma for Type A families, C for Type B families), 0-based (i, j, k).
std::map<std::string, Rational> constants(const ModelSpec& spec);

/// Predicted dimension from the family's known case analysis, or nullopt ("not-covered") when the
/// parameters are outside every normal form it covers.
std::optional<std::size_t> expected_dimension(const ModelSpec& spec, const Rational& mu);

/// The mu at which a tc3 family-(1) surface carries solutions, when Delta != 0.
std::optional<Rational> tc3_eigenvalue(const ModelSpec& spec);

struct CrossCheck {
  std::optional<std::size_t> predicted;
  std::size_t computed = 0;
  bool stabilized = true;
  bool agree() const { return !predicted || *predicted == computed; }
};
CrossCheck crosscheck(const ModelSpec& spec, const Rational& mu, std::span<const Rational> basepoint = {});

struct SweepRow {
  ModelSpec spec;
  Rational mu;
  std::size_t dim = 0;
  std::optional<std::size_t> predicted;
  std::string error;  // non-empty when the cell failed
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Solves every (model, mu) cell and checks the global properties: dim <= m + 1; surfaces never
/// have dim E(-1) = 2; Type A surfaces off mu in {0, -1} have dim 2 or 0 by the rank of rho;
/// exampleB2 never has dimension 3; dim = m + 1 at mu != mu_m forces rho = 0; and every
/// covered prediction agrees with the solver.
SweepReport sweep(std::span<const ModelSpec> models, std::span<const Rational> mus);

/// Random surfaces with constants p/q, q in {1, 2, 3}, |p/q| <= 3, rejecting flat ones.
ModelSpec random_type_a(Sampler& sampler);
ModelSpec random_type_b(Sampler& sampler);
/// tc3 family-(1) surfaces with Delta != 0, non-Type-A and rho_s != 0.
ModelSpec random_tc3_family1(Sampler& sampler);

/// exampleB2 grid over z in {0,1,2}, x in {0,1}, with y, w from small fixed lists.
std::vector<ModelSpec> example_b2_grid();

/// (nabla rho)_111^2 / rho_11^3. Throws PreconditionError unless rho_11 is not identically zero
/// and nabla rho is a multiple of dx^1 (x) dx^1 (x) dx^1.
ScalarExpr alpha_invariant(const AffineManifold& m);

/// 4 / (G_12^2 - (G_12^2)^2 + G_11^2 G_22^2) for an exampleEA2 spec.
Rational alpha_closed_form(const ModelSpec& spec);

}  // namespace aqe::catalog
