#include <iostream>

#include "CLI11.hpp"
#include "aqe/error.hpp"
#include "commands.hpp"
#include "json.hpp"

using aqe::cli::Options;

namespace {

void add_manifold(CLI::App* cmd, Options& o) {
  cmd->add_option("manifold", o.manifold, "Manifold document (JSON)")->required();
}

void add_mu(CLI::App* cmd, Options& o, bool required) {
  auto* opt = cmd->add_option("--mu", o.mu, "Eigenvalue(s) p/q; repeat or separate with commas")
                  ->delimiter(',')
                  ->allow_extra_args(false);
  if (required) opt->required();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--json", o.json, "Write the JSON report to this path ('-' for stdout)");
  cmd->add_option("--seed", o.seed, "Seed for every randomized choice");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine quasi-Einstein toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* curvature = app.add_subcommand("curvature", "Curvature and Ricci tensors of a manifold");
  add_manifold(curvature, o);
  add_common(curvature, o);

  auto* qe_dim = app.add_subcommand("qe-dim", "Dimension of the solution space at a point");
  add_manifold(qe_dim, o);
  add_mu(qe_dim, o, true);
  qe_dim->add_option("--basepoint", o.basepoint, "Comma-separated rational coordinates");
  add_common(qe_dim, o);

  auto* classify = app.add_subcommand("classify", "Compare a catalog model's predicted and computed dimensions");
  classify->add_option("--family", o.family, "typeA, typeB, exampleB1, exampleB2, exampleEA2, exampleEA3, tc2, tc3")
      ->required();
  classify->add_option("--variant", o.variant, "Normal-form variant (tc2: 1a 1b 2a 2b; tc3: 1 2a 2b)");
  classify->add_option("--sign", o.sign, "Sign choice for the +/- branches")->check(CLI::IsMember({-1, 1}));
  classify->add_option("--param", o.params, "key=value, e.g. 1,2^1=1 or z=2")->allow_extra_args(false);
  add_mu(classify, o, true);
  classify->add_option("--basepoint", o.basepoint, "Comma-separated rational coordinates");
  add_common(classify, o);

  auto* sweep = app.add_subcommand("sweep", "Solve a family over random models or a grid and check invariants");
  sweep->add_option("--family", o.family, "typeA, typeB, tc3 (random) or exampleB2 (grid)")->required();
  add_mu(sweep, o, true);
  sweep->add_option("--n", o.n, "Number of random models")->check(CLI::PositiveNumber);
  add_common(sweep, o);

  auto* deform = app.add_subcommand("deform", "Projectively deform a manifold");
  add_manifold(deform, o);
  auto* omega = deform->add_option("--omega", o.omega, "Components of the 1-form, comma-separated");
  auto* potential = deform->add_option("--potential", o.potential, "Potential g with omega = dg");
  omega->excludes(potential);
  add_common(deform, o);

  auto* flatten = app.add_subcommand("flatten", "Flat projective chart of a strongly projectively flat manifold");
  add_manifold(flatten, o);
  flatten->add_option("--basepoint", o.basepoint, "Comma-separated rational coordinates");
  flatten->add_option("--grid", o.grid, "Grid half-width in steps (grid has (2k+1)^m points)")
      ->check(CLI::NonNegativeNumber);
  flatten->add_option("--radius", o.radius, "Grid radius (default: a quarter of the distance to the excluded locus)");
  flatten->add_option("--geodesics", o.geodesics, "Number of random geodesics to test")->check(CLI::NonNegativeNumber);
  add_common(flatten, o);

  auto* extend = app.add_subcommand("extend", "Deformed Riemannian extension and its identities");
  add_manifold(extend, o);
  extend->add_option("--phi", o.phi, "Phi entry i,j=expr (1-based, symmetric)")->allow_extra_args(false);
  extend->add_option("--f", o.f, "Function on the base for the pullback identities");
  add_mu(extend, o, false);
  add_common(extend, o);

  auto* verify = app.add_subcommand("verify", "Check that f solves the equation, or that X is affine Killing");
  add_manifold(verify, o);
  verify->add_option("--f", o.f, "Candidate solution");
  add_mu(verify, o, false);
  verify->add_option("--killing", o.killing, "Vector field components, comma-separated");
  add_common(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aqe::cli::kInputError;
  }

  try {
    if (*curvature) return aqe::cli::run_curvature(o);
    if (*qe_dim) return aqe::cli::run_qe_dim(o);
    if (*classify) return aqe::cli::run_classify(o);
    if (*sweep) return aqe::cli::run_sweep(o);
    if (*deform) return aqe::cli::run_deform(o);
    if (*flatten) return aqe::cli::run_flatten(o);
    if (*extend) return aqe::cli::run_extend(o);
    if (*verify) return aqe::cli::run_verify(o);
  } catch (const aqe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return aqe::cli::kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return aqe::cli::kInputError;
  }
  return aqe::cli::kInputError;
}
