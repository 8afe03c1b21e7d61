// Command-line front end: train the elastic-topology provisioning agents,
// evaluate a checkpoint, or run one of the comparison baselines.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "entisac/runner.hpp"

namespace {

void add_common(CLI::App* cmd, entisac::RunManifest& manifest, bool& seed_set) {
  cmd->add_option("--config", manifest.config_path, "Scenario config file (key = value)")
      ->required();
  cmd->add_option("--seed", manifest.seed, "Run seed (default: the config's rng_seed)")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  cmd->add_option("--episodes", manifest.episodes, "Episode count")->check(CLI::PositiveNumber);
  cmd->add_option("--out", manifest.out_dir, "Output directory");
  cmd->add_option("--ma-window", manifest.ma_window, "Moving-average window for plots")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic-topology distributed ISAC provisioning simulator and trainer"};
  app.require_subcommand(1);

  entisac::RunManifest manifest;
  bool seed_set = false;

  CLI::App* train = app.add_subcommand("train", "Train the proposed scheme");
  add_common(train, manifest, seed_set);
  train->add_option("--checkpoint-interval", manifest.checkpoint_interval,
                    "Episodes between checkpoints (0: final only)");

  CLI::App* eval = app.add_subcommand("eval", "Greedy evaluation of a checkpoint");
  add_common(eval, manifest, seed_set);
  eval->add_option("--checkpoint", manifest.checkpoint_path, "Checkpoint to evaluate")
      ->required();

  CLI::App* baseline = app.add_subcommand("baseline", "Run a comparison scheme");
  add_common(baseline, manifest, seed_set);
  std::string kind = "random";
  baseline->add_option("--baseline", kind, "Scheme: ccn, cfn, or random")
      ->check(CLI::IsMember({"ccn", "cfn", "random"}));
  baseline->add_option("--checkpoint-interval", manifest.checkpoint_interval,
                       "Episodes between checkpoints (0: final only)");

  CLI11_PARSE(app, argc, argv);
  manifest.seed_overridden = seed_set;

  entisac::RunResult result;
  if (train->parsed()) {
    manifest.command = entisac::RunCommand::Train;
    result = entisac::run_train(manifest);
  } else if (eval->parsed()) {
    manifest.command = entisac::RunCommand::Eval;
    result = entisac::run_eval(manifest);
  } else {
    manifest.command = entisac::RunCommand::Baseline;
    manifest.baseline = kind == "ccn" ? entisac::BaselineKind::CcnOnly
                        : kind == "cfn" ? entisac::BaselineKind::CfnOnly
                                        : entisac::BaselineKind::RandomMrt;
    result = entisac::run_baseline(manifest);
  }

  if (result.exit_code == 0 && !result.episodes.empty()) {
    const auto& last = result.episodes.back();
    std::printf("completed %zu episodes; final usr %.6g, reward %.6g\n",
                result.episodes.size(), last.usr, last.reward_mean);
  }
  return result.exit_code;
}
