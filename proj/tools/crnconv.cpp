#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "crn/errors.hpp"

int main(int argc, char** argv) {
  using namespace crnconv;
  CLI::App app{"Coupled-chain convergence bounds: simulate, couple, classify, bound."};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate one forward or backward trajectory");
  simulate->add_option("--chain", sim.chain, "Registered chain name")->required();
  simulate->add_option("--n", sim.n, "Number of steps")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed (CRN_SEED overrides)")->capture_default_str();
  simulate->add_option("--x0", sim.x0, "Initial state (default: chain's registered x0)");
  simulate->add_flag("--backward", sim.backward, "Backward process instead of forward");
  simulate->add_flag("--plot", sim.plot, "Also write trajectory.svg");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();

  CoupleArgs cpl;
  auto* couple = app.add_subcommand("couple", "Average |x_n - y_n|^p over coupled replicates");
  couple->add_option("--chain", cpl.chain, "Registered chain name")->required();
  couple->add_option("--n", cpl.n, "Horizon N")->capture_default_str();
  couple->add_option("--replicates", cpl.replicates, "Replicates I")->capture_default_str();
  couple->add_option("--p", cpl.p, "Exponent p >= 1")->capture_default_str();
  couple->add_option("--coupling", cpl.coupling, "crn | antithetic | independent")->capture_default_str();
  couple->add_option("--x0", cpl.x0, "Initial state of the first copy");
  couple->add_option("--y0", cpl.y0, "Initial state of the second copy");
  couple->add_option("--seed", cpl.seed, "Seed (CRN_SEED overrides)")->capture_default_str();
  couple->add_option("--workers", cpl.workers, "Worker threads; output does not depend on it")
      ->capture_default_str();
  couple->add_option("--out", cpl.out, "Output directory")->capture_default_str();

  MonotonicityArgs mono;
  auto* monotonicity = app.add_subcommand("monotonicity", "Monotonicity regions and one-step W2^2");
  monotonicity->add_option("--function", mono.function, "cos | linear | logistic | trig")->required();
  monotonicity->add_option("--x", mono.x, "First point")->capture_default_str();
  monotonicity->add_option("--y", mono.y, "Second point")->capture_default_str();
  monotonicity->add_option("--grid", mono.grid, "Grid cells")->capture_default_str();
  monotonicity->add_option("--samples", mono.samples, "Uniforms for the W2^2 estimate")
      ->capture_default_str();
  monotonicity->add_option("--seed", mono.seed, "Seed (CRN_SEED overrides)")->capture_default_str();
  monotonicity->add_option("--out", mono.out, "Output directory")->capture_default_str();

  BoundArgs bnd;
  auto* bound = app.add_subcommand("bound", "Gibbs regression stationarity and TV bounds");
  auto* config_opt = bound->add_option("--config", bnd.config, "JSON config file");
  bound->add_option("--example", bnd.example, "Named example: gibbs-regression")->excludes(config_opt);
  bound->add_option("--seed", bnd.seed, "Seed (overrides config; CRN_SEED overrides both)");
  bound->add_option("--workers", bnd.workers, "Worker threads; output does not depend on it")
      ->capture_default_str();
  bound->add_option("--out", bnd.out, "Output directory")->capture_default_str();

  auto* chains = app.add_subcommand("chains", "List registered chains");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim, std::cout);
    if (couple->parsed()) return run_couple(cpl, std::cout);
    if (monotonicity->parsed()) return run_monotonicity(mono, std::cout);
    if (bound->parsed()) return run_bound(bnd, std::cout);
    if (chains->parsed()) return run_chains(std::cout);
  } catch (const crn::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const crn::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const crn::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
