// Command-line front end: isotropic sweeps, witness checks, Hilbert-Schmidt
// measures and CHSH scans, emitted as CSV or JSON.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "witnesskit/cli.hpp"

namespace wk = witnesskit;
namespace cli = witnesskit::cli;

int main(int argc, char** argv) {
  CLI::App app{"witnesskit: entanglement witnesses and Hilbert-Schmidt measures for bipartite states"};
  app.require_subcommand(1);

  cli::RunConfig cfg;
  cfg.projection.inner.seed = cli::default_seed();
  std::string alpha_text;
  std::string config_path;
  std::string format_text = "csv";

  const std::map<std::string, cli::Command> commands{
      {"iso-sweep", cli::Command::IsoSweep},       {"witness-check", cli::Command::WitnessCheck},
      {"measure", cli::Command::Measure},          {"bnt", cli::Command::Bnt},
      {"gamma-signs", cli::Command::GammaSigns},   {"chsh-scan", cli::Command::ChshScan}};
  const std::map<std::string, std::string> descriptions{
      {"iso-sweep", "numeric vs closed-form measure over an isotropic alpha grid"},
      {"witness-check", "test whether a guessed separable state is the nearest one"},
      {"measure", "nearest separable state and Hilbert-Schmidt measure"},
      {"bnt", "compare the measure with the maximal GBI violation"},
      {"gamma-signs", "sign pattern of the isotropic Gamma operator"},
      {"chsh-scan", "maximal CHSH value for isotropic qubit states"}};

  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--d", cfg.d, "subsystem dimension")->check(CLI::Range(2, 64));
    sub->add_option("--alpha", alpha_text, "alpha value or start:end:step");
    sub->add_option("--n-starts", cfg.projection.inner.n_starts, "random starts of the product-state solver")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.projection.inner.max_iters, "sweeps per start of the product-state solver")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-gap", cfg.projection.tol_gap, "stopping gap of the projection")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-outer-iters", cfg.projection.max_outer_iters, "projection iteration budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.projection.inner.seed, "random seed (default: WITNESSKIT_SEED or 0)");
    sub->add_option("--config", config_path, "solver config JSON {n_starts, max_iters, tol_conv, seed}");
    sub->add_option("--state", cfg.state_path, "density matrix JSON {d_a, d_b, entries}");
    sub->add_option("--guess-alpha", cfg.guess_alpha, "isotropic guess for witness-check (default 1/(d+1))");
    sub->add_option("--output", cfg.output, "output file (default stdout)");
    sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&cfg, command = command] { cfg.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw wk::DomainError("cannot open config '" + config_path + "'");
      // Precedence: explicit flag, then the file, then WITNESSKIT_SEED/defaults.
      const wk::SolverConfig flags = cfg.projection.inner;
      cfg.projection.inner = wk::solver_config_from_json(nlohmann::json::parse(in), wk::SolverConfig{.seed = cli::default_seed()});
      for (CLI::App* sub : app.get_subcommands()) {
        if (sub->count("--n-starts")) cfg.projection.inner.n_starts = flags.n_starts;
        if (sub->count("--max-iters")) cfg.projection.inner.max_iters = flags.max_iters;
        if (sub->count("--seed")) cfg.projection.inner.seed = flags.seed;
      }
    }
    if (!alpha_text.empty()) cfg.alpha = cli::parse_alpha(alpha_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  }
  cfg.format = format_text == "json" ? cli::Format::Json : cli::Format::Csv;
  return cli::run(cfg, std::cout, std::cerr);
}
