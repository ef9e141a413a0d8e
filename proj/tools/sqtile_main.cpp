#include <CLI11.hpp>

#include "sqtile/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sqtile: square-tiled surfaces, the Kontsevich-Zorich cocycle, "
               "Lyapunov spectra and invariant-subbundle certificates"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file overriding defaults");

  sqtile::RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "origami JSON file or corpus:<name>");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--steps", cfg.steps, "stream / iteration steps");
    sub->add_option("--blocks", cfg.blocks, "confidence-interval blocks");
    sub->add_option("--dim", cfg.dim, "subspace dimension (0 = full)");
    sub->add_option("--space", cfg.space, "absolute | relative");
    sub->add_option("--max-nodes", cfg.max_nodes, "orbit node cap");
    sub->add_option("--depth", cfg.depth, "orbit BFS depth cap (-1 = none)");
    sub->add_option("--word-len", cfg.word_len, "screening word length");
    sub->add_option("--norm-cap", cfg.norm_cap, "bounded-growth cap (0 = auto)");
    sub->add_option("--element-cap", cfg.element_cap, "group closure cap");
    sub->add_option("--tol", cfg.tol, "numeric tolerance");
    sub->add_option("--count", cfg.count, "orbit cloud size");
    sub->add_option("--spread", cfg.spread, "cloud perturbation scale");
    sub->add_option("--digit-cap", cfg.digit_cap, "continued-fraction digit cap");
    sub->add_option("--streams", cfg.streams, "parallel trajectory count");
    sub->add_option("--tangent", cfg.tangent, "tautological | envelope");
    sub->add_option("--format", cfg.format, "json | csv | text");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--instance", cfg.instance, "holonomy instance JSON");
  };
  for (const char* name : {"stratum", "homology", "orbit", "lyapunov", "forni",
                           "holonomy", "envelope", "check-theorem", "corpus"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  return sqtile::run_cli(cfg, std::cout, std::cerr);
}
