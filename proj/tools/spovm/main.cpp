#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "spovm/errors.hpp"

using namespace spovm::cli;

namespace {

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--tolerance", c.tolerance, "numerical tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured POVM simulation toolkit"};
  app.require_subcommand(1);
  Common common;

  RatesOptions rates;
  auto* c_rates = app.add_subcommand("rates", "rate region for a problem spec");
  add_common(c_rates, common);
  c_rates->add_option("--spec", rates.spec, "problem JSON")->required()->check(CLI::ExistingFile);
  c_rates->add_option("--samples", rates.samples, "points for the baseline comparison");

  ExampleOptions example;
  auto* c_example = app.add_subcommand("example", "run a bundled example");
  add_common(c_example, common);
  c_example->add_option("--id", example.id, "example id (1, 2 or 3)")->check(CLI::Range(1, 3));
  c_example->add_option("--data-dir", example.data_dir, "directory of bundled specs");
  c_example->add_option("--match", example.match, "allowed |expected - computed|");

  SurfaceOptions surface;
  auto* c_surface = app.add_subcommand("surface", "gain indicator over a theta grid (CSV)");
  add_common(c_surface, common);
  c_surface->add_option("--spec", surface.spec, "problem JSON (default: bundled example 3)");
  c_surface->add_option("--lo", surface.lo);
  c_surface->add_option("--hi", surface.hi);
  c_surface->add_option("--points", surface.points, "grid points per axis");

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "build a protocol instance and report K");
  add_common(c_sim, common);
  c_sim->add_option("--mode", sim.mode)->check(CLI::IsMember({"p2p", "distributed"}));
  c_sim->add_option("--spec", sim.spec, "problem JSON (default: trine / bundled example 1)");
  c_sim->add_option("--n", sim.n);
  c_sim->add_option("--k", sim.k);
  c_sim->add_option("--l", sim.l);
  c_sim->add_option("--l1", sim.l1);
  c_sim->add_option("--l2", sim.l2);
  c_sim->add_option("--p", sim.p);
  c_sim->add_option("--N", sim.N);
  c_sim->add_option("--N1", sim.N1);
  c_sim->add_option("--N2", sim.N2);
  c_sim->add_option("--eta", sim.eta);
  c_sim->add_option("--delta", sim.delta);

  CoveringOptions cov;
  auto* c_cov = app.add_subcommand("covering", "covering bound experiment");
  add_common(c_cov, common);
  c_cov->add_option("--M", cov.M, "code sizes (powers of 2)")->delimiter(',');
  c_cov->add_option("--trials", cov.trials);
  c_cov->add_option("--sampler", cov.sampler)->check(CLI::IsMember({"iid", "ucc", "both"}));
  c_cov->add_option("--bits", cov.bits, "alphabet F_2^bits");
  c_cov->add_option("--noise", cov.noise, "white-noise weight of each state");

  PruningOptions prune;
  auto* c_prune = app.add_subcommand("pruning", "pruning trace inequalities");
  add_common(c_prune, common);
  c_prune->add_option("--trials", prune.trials);
  c_prune->add_option("--eta", prune.eta);
  c_prune->add_option("--dim", prune.dim);
  c_prune->add_option("--rank", prune.rank);

  UccOptions ucc;
  auto* c_ucc = app.add_subcommand("ucc", "sample, verify or check unionized coset codes");
  add_common(c_ucc, common);
  c_ucc->add_option("--p", ucc.p);
  c_ucc->add_option("--n", ucc.n);
  c_ucc->add_option("--k", ucc.k);
  c_ucc->add_option("--l", ucc.l);
  c_ucc->add_option("--N", ucc.N, "codes sharing one G");
  c_ucc->add_flag("--check-pairwise", ucc.check_pairwise, "exhaustive pairwise check");
  c_ucc->add_option("--witness", ucc.witness, "dependence witness of this order");
  c_ucc->add_option("--verify", ucc.verify, "code JSON to validate")->check(CLI::ExistingFile);

  FmOptions fm;
  auto* c_fm = app.add_subcommand("fm", "Fourier-Motzkin elimination on a region");
  add_common(c_fm, common);
  c_fm->add_option("--region", fm.region, "region JSON")->check(CLI::ExistingFile);
  c_fm->add_option("--spec", fm.spec, "problem JSON; starts from the Rtilde region")
      ->check(CLI::ExistingFile);
  c_fm->add_option("--eliminate", fm.eliminate, "variables to project out");
  c_fm->add_option("--check", fm.check, "compare with the direct region on N points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every parse failure is bad input.
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  try {
    if (*c_rates) return cmd_rates(common, rates);
    if (*c_example) return cmd_example(common, example);
    if (*c_surface) return cmd_surface(common, surface);
    if (*c_sim) return cmd_simulate(common, sim);
    if (*c_cov) return cmd_covering(common, cov);
    if (*c_prune) return cmd_pruning(common, prune);
    if (*c_ucc) return cmd_ucc(common, ucc);
    if (*c_fm) return cmd_fm(common, fm);
  } catch (const spovm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
