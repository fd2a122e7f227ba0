// Command-line front end: run games, compute distances, build and check
// certificates, and reproduce the two-favorability demonstration.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypergame/commands.hpp"

using namespace hypergame;

namespace {

std::string resolve_alpha(const std::string& s) {
  return s == "random" ? "random-alpha" : s;
}
std::string resolve_beta(const std::string& s) {
  return s == "random" ? "random-beta" : s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact hyperspace game engine"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "play a game and write the trace");
  std::string game = "ch";
  std::string alpha = "random-alpha";
  std::string beta = "sigma-ch";
  std::string metric = "d";
  std::string depth_str = "auto";
  std::string out;
  std::uint64_t rounds = 1, seed = 0, cap = 1;
  run->add_option("--game", game, "ch | bm")->check(CLI::IsMember({"ch", "bm"}));
  run->add_option("--alpha", alpha, "alpha strategy id");
  run->add_option("--beta", beta, "beta strategy id");
  run->add_option("--rounds", rounds, "rounds 0..R are played")->required();
  run->add_option("--seed", seed, "run seed");
  run->add_option("--cap", cap, "adversary radius-denominator cap");
  run->add_option("--depth", depth_str, "resolution depth or 'auto'");
  run->add_option("--metric", metric, "d | dprime")
      ->check(CLI::IsMember({"d", "dprime"}));
  run->add_option("--out", out, "trace output path");

  // certify
  auto* cert = app.add_subcommand("certify", "build or check a certificate");
  std::string mode, trace_path, cert_path;
  cert->add_option("mode", mode, "build | check")
      ->required()
      ->check(CLI::IsMember({"build", "check"}));
  cert->add_option("--trace", trace_path, "trace file")->required();
  cert->add_option("--cert", cert_path, "certificate file")->required();

  // hausdorff
  auto* hd = app.add_subcommand("hausdorff",
                                "exact Hausdorff distance of two set files");
  std::string set_a, set_b, hd_metric = "d";
  std::uint64_t hd_depth = 64;
  hd->add_option("seta", set_a, "first set file")->required();
  hd->add_option("setb", set_b, "second set file")->required();
  hd->add_option("--depth", hd_depth, "resolution depth");
  hd->add_option("--metric", hd_metric, "d | dprime")
      ->check(CLI::IsMember({"d", "dprime"}));

  // demo-corollary
  auto* demo = app.add_subcommand(
      "demo-corollary",
      "both favorability witnesses over the same space, side by side");
  std::uint64_t demo_rounds = 5, demo_seed = 1;
  demo->add_option("--rounds", demo_rounds, "rounds (at least 3)");
  demo->add_option("--seed", demo_seed, "run seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CmdResult result;
  try {
    if (*run) {
      RunConfig cfg;
      cfg.kind = game == "ch" ? GameKind::Choquet : GameKind::BanachMazur;
      cfg.rounds = rounds;
      cfg.seed = seed;
      cfg.cap = cap;
      cfg.alpha_id = resolve_alpha(alpha);
      cfg.beta_id = resolve_beta(beta);
      cfg.metric = metric == "d" ? Metric::BaireD : Metric::DPrime;
      cfg.out_path = out;
      if (depth_str != "auto") cfg.depth = Int(depth_str);
      result = cmd_run(cfg);
    } else if (*cert) {
      result = cmd_certify(mode, trace_path, cert_path);
    } else if (*hd) {
      result = cmd_hausdorff(set_a, set_b, Int(hd_depth),
                             hd_metric == "d" ? Metric::BaireD
                                              : Metric::DPrime);
    } else {
      result = cmd_demo_corollary(demo_rounds, demo_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << result.output;
  return result.exit_code;
}
