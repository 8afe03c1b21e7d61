#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entisac/baselines.hpp"
#include "entisac/environment.hpp"
#include "entisac/learner.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

enum class RunCommand { Train, Eval, Baseline };

/// One run's full invocation record.
struct RunManifest {
  RunCommand command = RunCommand::Train;
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_overridden = false;  ///< false: use the config's rng_seed
  int episodes = 1;
  std::string out_dir = "out";
  std::string checkpoint_path;    ///< eval input checkpoint
  int checkpoint_interval = 0;    ///< episodes between checkpoints; 0 = final only
  BaselineKind baseline = BaselineKind::RandomMrt;
  int ma_window = 40;
};

struct EpisodeStats {
  int episode = 0;
  double usr = 0.0;
  double total_utility = 0.0;
  double comm_utility = 0.0;
  double sense_utility = 0.0;
  double overhead = 0.0;
  double reward_mean = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

struct RunResult {
  int exit_code = 1;
  std::vector<EpisodeStats> episodes;
};

/// Which scheme drives each role: the proposed scheme learns everything; the
/// restricted baselines force part of the action set and train the rest;
/// Random-MRT learns nothing.
enum class SchemeName { Proposed, CcnOnly, CfnOnly, RandomMrt };

SchemeName scheme_for(BaselineKind kind);
bool role_learned(SchemeName scheme, Role role);
std::set<Role> trained_roles(SchemeName scheme);

/// One collected episode: the shared rewards, per-agent trajectories for
/// learned roles, and the per-frame diagnostics.
struct RolloutRecord {
  EpisodeBatch batch;
  std::vector<FrameDiagnostics> frames;
};

/// Plays one episode in protocol order. `learner` supplies actions for
/// learned roles (stochastic, or greedy when `greedy`); forced roles follow
/// the scheme; `mrt` must be non-null for the Random-MRT scheme.
RolloutRecord rollout_episode(Environment& env, const Scenario& scenario,
                              std::uint64_t episode_seed, MappoLearner* learner,
                              SchemeName scheme, RandomStream* policy_rng,
                              RandomMrtPolicy* mrt, bool greedy, bool collect);

RunResult run_train(const RunManifest& manifest);
RunResult run_eval(const RunManifest& manifest);
RunResult run_baseline(const RunManifest& manifest);

/// Shared train/emit loop used by run_train and the learning baselines.
RunResult train_loop(const RunManifest& manifest, SchemeName scheme);

/// Deterministic CSV float formatting used by every emitted file.
std::string csv_num(double v);

}  // namespace entisac
