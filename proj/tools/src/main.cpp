#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xg/errors.hpp"
#include "xgcli/commands.hpp"

namespace {

void add_threads(CLI::App* cmd, unsigned& threads) {
  cmd->add_option("--threads", threads, "Worker threads (0 = all hardware threads)")
      ->default_val(0u);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XOR game values: exact solvers, bounds, and reproducible experiments"};
  app.require_subcommand(1);

  using xg::cli::BellConfig;
  using xg::cli::ChevetConfig;
  using xg::cli::ConcentrationConfig;
  using xg::cli::GenerateConfig;
  using xg::cli::SolveConfig;
  using xg::cli::TightnessConfig;

  SolveConfig solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Compute values and bounds for a game file");
  cmd_solve->add_option("--game", solve.game_path, "Game JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_solve->add_option("--method", solve.method, "exact | heuristic | auto")
      ->default_val("auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}));
  cmd_solve->add_option("--c", solve.cs, "Message bits to solve for (comma separated)")
      ->delimiter(',');
  cmd_solve->add_option("--out", solve.out, "Report path (default: stdout)");
  cmd_solve->add_option("--restarts", solve.restarts, "Heuristic restarts")->default_val(20);
  CLI::Option* solve_seed = cmd_solve->add_option("--seed", solve.seed, "Heuristic seed");
  add_threads(cmd_solve, solve.threads);
  cmd_solve->callback([&] {
    solve.has_seed = solve_seed->count() > 0;
    const nlohmann::json report = xg::cli::cmd_solve(solve);
    if (solve.out.empty()) std::cout << report.dump(2) << "\n";
  });

  CLI::App* generate = app.add_subcommand("generate", "Emit a game file");
  generate->require_subcommand(1);

  GenerateConfig gen_chevet;
  gen_chevet.kind = "chevet";
  CLI::App* cmd_chevet = generate->add_subcommand("chevet", "Uniform random sign game");
  cmd_chevet->add_option("--n", gen_chevet.n, "Inputs per side")->default_val(16);
  cmd_chevet->add_option("--seed", gen_chevet.seed, "Seed")->required();
  cmd_chevet->add_option("--out", gen_chevet.out, "Game path")->required();
  cmd_chevet->callback([&] { xg::cli::cmd_generate(gen_chevet); });

  GenerateConfig gen_block;
  gen_block.kind = "chevet-block";
  CLI::App* cmd_block = generate->add_subcommand("chevet-block",
                                                 "Random sign block on 2^c inputs, padded");
  cmd_block->add_option("--n", gen_block.n, "Inputs per side")->default_val(16);
  cmd_block->add_option("--c", gen_block.c, "Block bits (block is 2^c x 2^c)")->default_val(2);
  cmd_block->add_option("--seed", gen_block.seed, "Seed")->required();
  cmd_block->add_option("--out", gen_block.out, "Game path")->required();
  cmd_block->callback([&] { xg::cli::cmd_generate(gen_block); });

  GenerateConfig gen_levi;
  gen_levi.kind = "levi";
  CLI::App* cmd_levi = generate->add_subcommand("levi", "p-stable contraction game");
  cmd_levi->add_option("--delta", gen_levi.delta, "Contraction target in (0,1)")
      ->default_val(0.5);
  cmd_levi->add_option("--t", gen_levi.t, "Message budget (overrides --bits)")->default_val(-1);
  cmd_levi->add_option("--bits", gen_levi.bits, "Two-way bits c; t = 2^(2^c)")->default_val(0);
  cmd_levi->add_option("--epsilon", gen_levi.epsilon, "Isomorphism slack")->default_val(0.1);
  cmd_levi->add_option("--rows", gen_levi.rows, "Game size n (>= k)")->default_val(4096);
  cmd_levi->add_option("--samples", gen_levi.samples, "Distortion sample count")
      ->default_val(1000);
  cmd_levi->add_option("--seed", gen_levi.seed, "Seed")->required();
  cmd_levi->add_option("--out", gen_levi.out, "Game path")->required();
  cmd_levi->add_option("--report", gen_levi.report_path,
                       "Sidecar report path (default: <out>.report.json)");
  add_threads(cmd_levi, gen_levi.threads);
  cmd_levi->callback([&] { xg::cli::cmd_generate(gen_levi); });

  CLI::App* experiment = app.add_subcommand("experiment", "Run a batch experiment and write CSV/JSON");
  experiment->require_subcommand(1);

  ConcentrationConfig conc;
  CLI::App* cmd_conc = experiment->add_subcommand(
      "concentration", "Exact values of random games vs the measure-concentration bound");
  cmd_conc->add_option("--n", conc.n, "Inputs per side")->default_val(16);
  cmd_conc->add_option("--samples", conc.samples, "Random games (>= 100)")->default_val(1000);
  cmd_conc->add_option("--r", conc.rs, "Tail radii (comma separated)")->delimiter(',');
  cmd_conc->add_option("--seed", conc.seed, "Seed")->required();
  cmd_conc->add_option("--out", conc.out, "CSV path")->required();
  cmd_conc->add_option("--emit-plot", conc.plot, "Write a matplotlib script here");
  add_threads(cmd_conc, conc.threads);
  cmd_conc->callback([&] { xg::cli::cmd_experiment_concentration(conc); });

  TightnessConfig tight;
  CLI::App* cmd_tight = experiment->add_subcommand(
      "tightness", "Exact one-way/classical ratios against both theorem directions");
  cmd_tight->add_option("--n", tight.n, "Inputs per side (<= DP cap)")->default_val(12);
  cmd_tight->add_option("--games", tight.games, "Seeds per generator kind")->default_val(50);
  cmd_tight->add_option("--seed", tight.seed, "Seed")->required();
  cmd_tight->add_option("--out", tight.out, "CSV path")->required();
  cmd_tight->add_option("--emit-plot", tight.plot, "Write a matplotlib script here");
  add_threads(cmd_tight, tight.threads);
  cmd_tight->callback([&] { xg::cli::cmd_experiment_tightness(tight); });

  ChevetConfig chev;
  CLI::App* cmd_chev = experiment->add_subcommand(
      "chevet", "Mean raw bilinear maximum of random sign matrices vs the Chevet ceiling");
  cmd_chev->add_option("--n", chev.ns, "Sizes (comma separated)")->delimiter(',');
  cmd_chev->add_option("--samples", chev.samples, "Games per size (>= 100)")->default_val(200);
  cmd_chev->add_option("--seed", chev.seed, "Seed")->required();
  cmd_chev->add_option("--out", chev.out, "CSV path")->required();
  cmd_chev->add_option("--emit-plot", chev.plot, "Write a matplotlib script here");
  add_threads(cmd_chev, chev.threads);
  cmd_chev->callback([&] { xg::cli::cmd_experiment_chevet(chev); });

  BellConfig bell;
  CLI::App* cmd_bell = experiment->add_subcommand(
      "bell", "p-stable game whose classical and bounded-communication values straddle delta");
  cmd_bell->add_option("--delta", bell.delta, "Contraction target in (0,1)")->default_val(0.5);
  cmd_bell->add_option("--bits", bell.bits, "Two-way bits c")->default_val(1);
  cmd_bell->add_option("--t", bell.t, "Message budget override (default 2^(2^bits))")
      ->default_val(-1);
  cmd_bell->add_option("--epsilon", bell.epsilon, "Isomorphism slack")->default_val(0.1);
  cmd_bell->add_option("--rows", bell.rows, "Game size n")->default_val(4096);
  cmd_bell->add_option("--samples", bell.samples, "Distortion sample count")->default_val(1000);
  cmd_bell->add_option("--restarts", bell.restarts, "Hill climb restarts")->default_val(2);
  cmd_bell->add_option("--seed", bell.seed, "Seed")->required();
  cmd_bell->add_option("--out", bell.out, "Report path (default: stdout)");
  add_threads(cmd_bell, bell.threads);
  cmd_bell->callback([&] {
    const nlohmann::json report = xg::cli::cmd_experiment_bell(bell);
    if (bell.out.empty()) std::cout << report.dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const xg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return xg::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
