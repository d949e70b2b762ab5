#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "corrint_cli/scenario.hpp"

namespace {

using corrint::Json;
using corrint::cli::RunOptions;

struct CommonFlags {
  std::string name;
  std::optional<int> k;
  std::optional<int> N;
  std::optional<int> L;
  std::optional<int> per_block;
  std::string gamma = "0";
  std::optional<int> d;
  std::string norm = "EUCLID";
  std::optional<std::int64_t> cap;
  std::string mode;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, CommonFlags& f, bool construction) {
  if (construction) {
    app->add_option("--k", f.k, "number of nonzero values of F");
    app->add_option("--N", f.N, "truncation index");
    app->add_option("--L", f.L, "dyadic level");
    app->add_option("--per-block", f.per_block, "t-atoms per f-block");
    app->add_option("--gamma", f.gamma, "mass of the atomic part, as p/q");
    app->add_option("--d", f.d, "workspace dimension");
    app->add_option("--norm", f.norm, "SUM, EUCLID or MAX");
    app->add_option("--cap", f.cap, "enumeration cap");
    app->add_option("--mode", f.mode, "ENUMERATE or MINKOWSKI");
  }
  app->add_option("--seed", f.seed, "random seed");
}

Json base_config(const CommonFlags& f, const std::string& name, const std::string& operation) {
  Json c{{"schema", 1}, {"name", f.name.empty() ? name : f.name}, {"operation", operation}, {"seed", f.seed}};
  Json construction = Json::object();
  if (f.k) construction["k"] = *f.k;
  if (f.N) construction["N"] = *f.N;
  Json space{{"gamma", f.gamma}};
  if (f.L) space["L"] = *f.L;
  if (f.per_block) space["per_block"] = *f.per_block;
  Json workspace{{"norm", f.norm}};
  if (f.d) workspace["d"] = *f.d;
  c["construction"] = construction;
  c["space"] = space;
  c["workspace"] = workspace;
  if (f.cap) c["cap"] = *f.cap;
  if (!f.mode.empty()) c["mode"] = f.mode;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrint: integration of correspondences on dyadic models"};
  app.require_subcommand(1);
  app.fallthrough();
  RunOptions run;
  std::string out_dir = ".";
  bool plot = true;
  app.add_option("--out", out_dir, "directory for reports")->capture_default_str();

  std::string config_path;
  auto* cmd_run = app.add_subcommand("run", "run a scenario file");
  cmd_run->add_option("config", config_path, "scenario JSON")->required();
  cmd_run->add_flag("--emit-plot-data,!--no-plot-data", plot, "write series as CSV");

  CommonFlags conv, lyap, nec, uhc, game, lemma, rcd;
  std::string levels = "1..6";
  int samples = 4000;
  bool coincide = false;
  bool game_coincide = false;
  std::string g_alg = "trivial";
  std::string eq_mode = "BR_ITERATE";
  std::string initial = "DEFAULT";
  int max_iter = 50;
  std::string exps = "3..8";
  int trials = 1000;
  int lemma_L = 10;
  int resolution = 4;
  bool emit = false;

  auto* cmd_conv = app.add_subcommand("convexity-demo", "convexity gap of the integral cloud per refinement level");
  add_common(cmd_conv, conv, true);
  cmd_conv->add_option("--levels", levels, "refinement exponents, a..b");
  cmd_conv->add_option("--samples", samples, "sampled convex combinations");

  auto* cmd_lyap = app.add_subcommand("lyapunov-mix", "exact mixture of the pure selections");
  add_common(cmd_lyap, lyap, true);

  auto* cmd_nec = app.add_subcommand("necessity-demo", "midpoint of the counterexample integrals");
  add_common(cmd_nec, nec, true);
  cmd_nec->add_flag("--coincide", coincide, "use t_alg = f_alg");

  auto* cmd_uhc = app.add_subcommand("uhc-demo", "semidistance of truncated integral sets");
  add_common(cmd_uhc, uhc, true);
  cmd_uhc->add_option("--g-alg", g_alg, "trivial or f_alg");

  auto* cmd_game = app.add_subcommand("game-equilibrium", "equilibrium of the counterexample game");
  add_common(cmd_game, game, true);
  cmd_game->add_option("--equilibrium-mode", eq_mode, "BR_ITERATE or EXHAUSTIVE");
  cmd_game->add_option("--initial", initial, "DEFAULT, ZERO or MEAN");
  cmd_game->add_option("--max-iter", max_iter, "iteration limit");
  cmd_game->add_flag("--coincide", game_coincide, "use t_alg = f_alg");

  auto* cmd_lemma = app.add_subcommand("lemma-bound", "weighted Walsh coefficient bound");
  add_common(cmd_lemma, lemma, false);
  cmd_lemma->add_option("--d0-exponents", exps, "exponents e with d0 = 2^-e, a..b");
  cmd_lemma->add_option("--trials", trials, "random systems per d0");
  cmd_lemma->add_option("--level", lemma_L, "dyadic level");

  auto* cmd_rcd = app.add_subcommand("rcd-check", "kernel mixtures realized by selections");
  add_common(cmd_rcd, rcd, false);
  cmd_rcd->add_option("--resolution", resolution, "mixture weights j/resolution");

  for (auto* sub : {cmd_conv, cmd_lyap, cmd_nec, cmd_uhc, cmd_game, cmd_lemma, cmd_rcd}) {
    sub->add_flag("--emit-plot-data", emit, "write series as CSV");
  }

  CLI11_PARSE(app, argc, argv);
  run.out_dir = out_dir;

  if (cmd_run->parsed()) {
    run.emit_plot_data = plot;
    return corrint::cli::run_scenario(config_path, run, std::cout, std::cerr);
  }

  run.emit_plot_data = emit;
  Json config;
  if (cmd_conv->parsed()) {
    config = base_config(conv, "convexity-demo", "convexity");
    config["params"] = Json{{"levels", levels}, {"samples", samples}};
  } else if (cmd_lyap->parsed()) {
    config = base_config(lyap, "lyapunov-mix", "lyapunov-mix");
  } else if (cmd_nec->parsed()) {
    config = base_config(nec, "necessity-demo", "necessity");
    config["algebras"] = Json{{"t_alg", coincide ? "f_alg" : "atoms"}};
  } else if (cmd_uhc->parsed()) {
    config = base_config(uhc, "uhc-demo", "uhc");
    config["algebras"] = Json{{"g_alg", g_alg}};
  } else if (cmd_game->parsed()) {
    config = base_config(game, "game-equilibrium", "game-equilibrium");
    config["params"] = Json{{"mode", eq_mode}, {"initial", initial}, {"max_iter", max_iter}, {"coincide", game_coincide}};
  } else if (cmd_lemma->parsed()) {
    config = base_config(lemma, "lemma-bound", "lemma-bound");
    config.erase("construction");
    config.erase("space");
    config.erase("workspace");
    config["params"] = Json{{"d0_exponents", exps}, {"trials", trials}, {"L", lemma_L}};
  } else if (cmd_rcd->parsed()) {
    config = base_config(rcd, "rcd-check", "rcd-check");
    config.erase("construction");
    config.erase("space");
    config.erase("workspace");
    config["params"] = Json{{"resolution", resolution}};
  }
  return corrint::cli::run_config(config, run, std::cout, std::cerr);
}
