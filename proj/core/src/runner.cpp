#include "entisac/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "entisac/errors.hpp"

namespace entisac {

namespace {

namespace fs = std::filesystem;

constexpr const char* kMetricsHeader =
    "episode,usr,total_utility,comm_utility,sense_utility,overhead,reward_mean,"
    "actor_loss,critic_loss,entropy,wall_ms,seed";

double mean_of(const std::vector<FrameDiagnostics>& frames, double FrameDiagnostics::*field) {
  double sum = 0.0;
  for (const auto& f : frames) sum += f.*field;
  return frames.empty() ? 0.0 : sum / frames.size();
}

std::ofstream open_csv(const std::string& path, const std::string& header) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << header << '\n';
  out.flush();
  return out;
}

void write_run_info(const RunManifest& manifest, const ScenarioConfig& cfg,
                    const char* scheme) {
  std::ofstream info(manifest.out_dir + "/run_info.txt", std::ios::trunc);
  if (!info) return;
  const char* cmd = manifest.command == RunCommand::Train
                        ? "train"
                        : manifest.command == RunCommand::Eval ? "eval" : "baseline";
  info << "command: " << cmd << '\n'
       << "scheme: " << scheme << '\n'
       << "config: " << manifest.config_path << '\n'
       << "seed: " << manifest.seed << '\n'
       << "episodes: " << manifest.episodes << '\n'
       << "ma_window: " << manifest.ma_window << '\n'
       << "cells: " << cfg.m << ", clusters: " << cfg.r << ", aps_per_cell: " << cfg.a
       << ", users_per_cell: " << cfg.k << ", targets_per_cell: " << cfg.q << '\n'
       << "rng_substreams: scenario, channel, estimation, federated_estimation, motion, "
          "posterior, policy, learner_init, random_mrt (all derived from the run seed)\n";
}

EpisodeStats summarize(int episode, const RolloutRecord& record, const TrainStats& train,
                       double wall_ms, std::uint64_t seed) {
  EpisodeStats s;
  s.episode = episode;
  s.usr = mean_of(record.frames, &FrameDiagnostics::usr);
  s.total_utility = mean_of(record.frames, &FrameDiagnostics::utility);
  s.comm_utility = mean_of(record.frames, &FrameDiagnostics::utility_comm);
  s.sense_utility = mean_of(record.frames, &FrameDiagnostics::utility_sense);
  s.overhead = mean_of(record.frames, &FrameDiagnostics::overhead);
  s.reward_mean = mean_of(record.frames, &FrameDiagnostics::reward);
  s.actor_loss = train.actor_loss;
  s.critic_loss = train.critic_loss;
  s.entropy = train.entropy;
  s.wall_ms = wall_ms;
  s.seed = seed;
  return s;
}

bool stats_finite(const EpisodeStats& s) {
  return std::isfinite(s.usr) && std::isfinite(s.total_utility) &&
         std::isfinite(s.comm_utility) && std::isfinite(s.sense_utility) &&
         std::isfinite(s.overhead) && std::isfinite(s.reward_mean) &&
         std::isfinite(s.actor_loss) && std::isfinite(s.critic_loss) &&
         std::isfinite(s.entropy);
}

void write_stats_row(std::ofstream& csv, const EpisodeStats& s) {
  csv << s.episode << ',' << csv_num(s.usr) << ',' << csv_num(s.total_utility) << ','
      << csv_num(s.comm_utility) << ',' << csv_num(s.sense_utility) << ','
      << csv_num(s.overhead) << ',' << csv_num(s.reward_mean) << ','
      << csv_num(s.actor_loss) << ',' << csv_num(s.critic_loss) << ','
      << csv_num(s.entropy) << ',' << csv_num(s.wall_ms) << ',' << s.seed << '\n';
  csv.flush();
}

const char* scheme_label(SchemeName s) {
  switch (s) {
    case SchemeName::Proposed: return "proposed";
    case SchemeName::CcnOnly: return "ccn_only";
    case SchemeName::CfnOnly: return "cfn_only";
    case SchemeName::RandomMrt: return "random_mrt";
  }
  return "?";
}

}  // namespace

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

SchemeName scheme_for(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::CcnOnly: return SchemeName::CcnOnly;
    case BaselineKind::CfnOnly: return SchemeName::CfnOnly;
    case BaselineKind::RandomMrt: return SchemeName::RandomMrt;
  }
  return SchemeName::RandomMrt;
}

bool role_learned(SchemeName scheme, Role role) {
  switch (scheme) {
    case SchemeName::Proposed: return true;
    case SchemeName::CcnOnly: return role == Role::Lpb;
    case SchemeName::CfnOnly: return role == Role::Fg || role == Role::Fpb;
    case SchemeName::RandomMrt: return false;
  }
  return false;
}

std::set<Role> trained_roles(SchemeName scheme) {
  std::set<Role> roles;
  for (Role r : {Role::Lcp, Role::Lpb, Role::Fg, Role::Fpb}) {
    if (role_learned(scheme, r)) roles.insert(r);
  }
  return roles;
}

RolloutRecord rollout_episode(Environment& env, const Scenario& scenario,
                              std::uint64_t episode_seed, MappoLearner* learner,
                              SchemeName scheme, RandomStream* policy_rng,
                              RandomMrtPolicy* mrt, bool greedy, bool collect) {
  const ScenarioConfig& cfg = scenario.config;
  env.reset(scenario, episode_seed);

  RolloutRecord record;
  if (collect && learner) record.batch.trajectories.resize(learner->agent_count());

  auto act = [&](const AgentId& id) {
    const Eigen::VectorXd obs = env.observe(id);
    const Actor& actor = learner->actor(learner->agent_index(id));
    Eigen::VectorXd action;
    double logp = 0.0, entropy = 0.0;
    if (greedy) {
      action = actor.mode(obs);
    } else {
      PolicySample s = actor.sample(obs, *policy_rng);
      action = s.action;
      logp = s.log_prob;
      entropy = s.entropy;
    }
    if (collect) {
      AgentTrajectory& traj = record.batch.trajectories[learner->agent_index(id)];
      traj.obs.push_back(obs);
      traj.actions.push_back(action);
      traj.log_prob.push_back(logp);
      traj.entropy.push_back(entropy);
      traj.value.push_back(learner->value(id, obs, action));
    }
    return action;
  };

  bool done = false;
  while (!done) {
    if (role_learned(scheme, Role::Lcp)) {
      std::vector<Eigen::VectorXd> actions;
      for (int m = 0; m < cfg.m; ++m) actions.push_back(act({Role::Lcp, m}));
      env.submit_lcp(actions);
    } else if (scheme == SchemeName::RandomMrt) {
      env.submit_lcp(mrt->lcp_actions(env));
    } else if (scheme == SchemeName::CcnOnly) {
      env.submit_lcp(ccn_only_lcp_actions(cfg));
    } else {
      env.submit_lcp(cfn_only_lcp_actions(cfg));
    }

    if (role_learned(scheme, Role::Lpb)) {
      std::vector<Eigen::VectorXd> actions;
      for (int m = 0; m < cfg.m; ++m) actions.push_back(act({Role::Lpb, m}));
      env.submit_lpb(actions);
    } else if (scheme == SchemeName::RandomMrt) {
      env.submit_lpb(mrt->lpb_actions(env));
    } else {
      env.submit_lpb(cfn_only_lpb_actions(cfg));
    }

    if (role_learned(scheme, Role::Fg)) {
      env.submit_fg(act({Role::Fg, 0}));
    } else if (scheme == SchemeName::RandomMrt) {
      env.submit_fg(mrt->fg_action(env));
    } else {
      env.submit_fg(ccn_only_fg_action(cfg));
    }

    if (role_learned(scheme, Role::Fpb)) {
      std::vector<Eigen::VectorXd> actions;
      for (int r = 0; r < cfg.r; ++r) actions.push_back(act({Role::Fpb, r}));
      env.submit_fpb(actions);
    } else if (scheme == SchemeName::RandomMrt) {
      env.submit_fpb(mrt->fpb_actions(env));
    } else {
      env.submit_fpb(ccn_only_fpb_actions(cfg));
    }

    StepResult res = env.finish_frame();
    record.batch.rewards.push_back(res.reward);
    record.frames.push_back(std::move(res.diag));
    done = res.done;
  }
  return record;
}

RunResult train_loop(const RunManifest& manifest, SchemeName scheme) {
  RunResult result;
  try {
    if (manifest.episodes < 1) throw ConfigError("episode count must be >= 1");
    ScenarioConfig cfg = ScenarioConfig::from_file(manifest.config_path);
    const std::uint64_t seed = manifest.seed_overridden ? manifest.seed : cfg.rng_seed;
    RunManifest mf = manifest;
    mf.seed = seed;

    fs::create_directories(mf.out_dir);
    std::ofstream csv = open_csv(mf.out_dir + "/metrics.csv", kMetricsHeader);
    write_run_info(mf, cfg, scheme_label(scheme));

    const Scenario base = build_scenario(cfg, seed);
    RandomStream scenario_rng = RandomStream::child(seed, "scenario_perturb");
    RandomStream policy_rng = RandomStream::child(seed, "policy");
    RandomMrtPolicy mrt(seed);

    const bool learning = scheme != SchemeName::RandomMrt;
    MappoLearner learner(cfg, seed);
    learner.set_total_updates(mf.episodes);
    const std::set<Role> trained = trained_roles(scheme);

    Environment env(base, seed);
    bool all_finite = true;
    for (int ep = 0; ep < mf.episodes; ++ep) {
      const auto t0 = std::chrono::steady_clock::now();
      const Scenario sc = perturb_positions(base, scenario_rng);
      const std::uint64_t ep_seed = mix_seed(seed, "episode", static_cast<std::uint64_t>(ep));
      RolloutRecord record = rollout_episode(env, sc, ep_seed, &learner, scheme,
                                             &policy_rng, &mrt, /*greedy=*/false,
                                             /*collect=*/learning);
      TrainStats train;
      if (learning) train = learner.update(record.batch, ep, trained);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      const EpisodeStats stats = summarize(ep, record, train, wall_ms, seed);
      all_finite = all_finite && stats_finite(stats);
      write_stats_row(csv, stats);
      result.episodes.push_back(stats);

      if (learning && mf.checkpoint_interval > 0 && (ep + 1) % mf.checkpoint_interval == 0) {
        char name[64];
        std::snprintf(name, sizeof(name), "/checkpoint_ep%06d.ckpt", ep + 1);
        learner.save_checkpoint(mf.out_dir + name);
      }
    }
    if (learning) learner.save_checkpoint(mf.out_dir + "/checkpoint_final.ckpt");
    result.exit_code = all_finite ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[entisac] run failed: %s\n", e.what());
    result.exit_code = 1;
  }
  return result;
}

RunResult run_train(const RunManifest& manifest) {
  return train_loop(manifest, SchemeName::Proposed);
}

RunResult run_baseline(const RunManifest& manifest) {
  return train_loop(manifest, scheme_for(manifest.baseline));
}

RunResult run_eval(const RunManifest& manifest) {
  RunResult result;
  try {
    if (manifest.episodes < 1) throw ConfigError("episode count must be >= 1");
    if (manifest.checkpoint_path.empty()) throw ConfigError("eval requires a checkpoint");
    ScenarioConfig cfg = ScenarioConfig::from_file(manifest.config_path);
    const std::uint64_t seed = manifest.seed_overridden ? manifest.seed : cfg.rng_seed;
    RunManifest mf = manifest;
    mf.seed = seed;

    fs::create_directories(mf.out_dir);
    std::ofstream csv = open_csv(mf.out_dir + "/metrics.csv", kMetricsHeader);

    std::string detail_header = "episode,frame,u,s,usr,reward";
    for (int k = 0; k < cfg.num_users(); ++k) detail_header += ",rate_u" + std::to_string(k);
    for (int q = 0; q < cfg.num_targets(); ++q) {
      detail_header += ",pos_err_t" + std::to_string(q);
    }
    for (int q = 0; q < cfg.num_targets(); ++q) {
      detail_header += ",vel_err_t" + std::to_string(q);
    }
    for (int m = 0; m < cfg.m; ++m) detail_header += ",o1_c" + std::to_string(m);
    for (int m = 0; m < cfg.m; ++m) detail_header += ",o2_c" + std::to_string(m);
    for (int r = 0; r < cfg.r; ++r) detail_header += ",of_r" + std::to_string(r);
    std::ofstream detail = open_csv(mf.out_dir + "/detail.csv", detail_header);
    write_run_info(mf, cfg, "eval");

    MappoLearner learner(cfg, seed);
    learner.load_checkpoint(mf.checkpoint_path);

    const Scenario base = build_scenario(cfg, seed);
    RandomStream scenario_rng = RandomStream::child(seed, "scenario_perturb");
    Environment env(base, seed);

    bool all_finite = true;
    for (int ep = 0; ep < mf.episodes; ++ep) {
      const auto t0 = std::chrono::steady_clock::now();
      const Scenario sc = perturb_positions(base, scenario_rng);
      const std::uint64_t ep_seed = mix_seed(seed, "episode", static_cast<std::uint64_t>(ep));
      RolloutRecord record = rollout_episode(env, sc, ep_seed, &learner,
                                             SchemeName::Proposed, nullptr, nullptr,
                                             /*greedy=*/true, /*collect=*/false);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      const EpisodeStats stats = summarize(ep, record, TrainStats{}, wall_ms, seed);
      all_finite = all_finite && stats_finite(stats);
      write_stats_row(csv, stats);
      result.episodes.push_back(stats);

      for (const FrameDiagnostics& f : record.frames) {
        detail << ep << ',' << f.frame << ',' << csv_num(f.utility) << ','
               << csv_num(f.overhead) << ',' << csv_num(f.usr) << ',' << csv_num(f.reward);
        for (int k = 0; k < cfg.num_users(); ++k) detail << ',' << csv_num(f.user_rate[k]);
        for (int q = 0; q < cfg.num_targets(); ++q) {
          detail << ',' << csv_num(f.target_pos_err[q]);
        }
        for (int q = 0; q < cfg.num_targets(); ++q) {
          detail << ',' << csv_num(f.target_vel_err[q]);
        }
        for (int m = 0; m < cfg.m; ++m) detail << ',' << f.o1[m];
        for (int m = 0; m < cfg.m; ++m) detail << ',' << f.o2[m];
        for (int r = 0; r < cfg.r; ++r) detail << ',' << f.o_fed[r];
        detail << '\n';
        detail.flush();
      }
    }
    result.exit_code = all_finite ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[entisac] run failed: %s\n", e.what());
    result.exit_code = 1;
  }
  return result;
}

}  // namespace entisac
