#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entisac/environment.hpp"
#include "entisac/mlp.hpp"
#include "entisac/policy.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

/// One agent's collected sequence over an episode.
struct AgentTrajectory {
  std::vector<Eigen::VectorXd> obs;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> log_prob;
  std::vector<double> value;
  std::vector<double> entropy;
};

/// Full-episode batch: the shared reward sequence plus one trajectory per
/// agent in learner order (LCP 0..M-1, LPB 0..M-1, FG, FPB 0..R-1).
struct EpisodeBatch {
  std::vector<double> rewards;
  std::vector<AgentTrajectory> trajectories;
};

struct GaeResult {
  std::vector<double> deltas;
  std::vector<double> advantages;
  std::vector<double> returns;  ///< advantage + value
};

/// TD errors and the backward advantage recursion; the value beyond the
/// horizon is zero (true episode end).
GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      double gamma, double gae_lambda);

/// In-place standardization of pooled advantage sequences to zero mean and
/// unit deviation (deviation floor 1e-8).
void standardize_advantages(std::vector<std::vector<double>>& per_agent);

/// Clipped-surrogate actor loss over a batch (already flattened):
/// -mean(min(ratio*A, clip(ratio)*A) + eta_h * H).
double actor_loss_value(const std::vector<double>& logp_new, const std::vector<double>& logp_old,
                        const std::vector<double>& adv_norm, const std::vector<double>& entropy,
                        double clip_eps, double entropy_coef);

double smooth_l1(double x);
double smooth_l1_grad(double x);

/// Critic loss: mean smooth-L1 of value minus target return.
double critic_loss_value(const std::vector<double>& values, const std::vector<double>& returns);

struct TrainStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  double mean_ratio = 1.0;
  double explained_variance = 0.0;
  int skipped_steps = 0;  ///< optimizer steps dropped on non-finite gradients
};

/// Centralized-training / decentralized-execution PPO over the four agent
/// roles: per-agent actors, one shared critic per role (the critic input
/// carries a one-hot local index).
class MappoLearner {
 public:
  MappoLearner(const ScenarioConfig& cfg, std::uint64_t seed);

  const ScenarioConfig& config() const { return cfg_; }
  const std::vector<AgentId>& agents() const { return agents_; }
  int agent_count() const { return static_cast<int>(agents_.size()); }
  int agent_index(const AgentId& id) const;

  Actor& actor(int agent) { return actors_[agent]; }
  const Actor& actor(int agent) const { return actors_[agent]; }
  Critic& critic(Role role) { return critics_[static_cast<int>(role)]; }
  const Critic& critic(Role role) const { return critics_[static_cast<int>(role)]; }

  /// Critic input [obs, encoded action, one-hot local index].
  Eigen::VectorXd critic_input(const AgentId& id, const Eigen::VectorXd& obs,
                               const Eigen::VectorXd& action) const;
  double value(const AgentId& id, const Eigen::VectorXd& obs,
               const Eigen::VectorXd& action) const;

  /// Linear anneal position for update step `step` out of `total_updates`.
  double clip_at(int step) const;
  double entropy_coef_at(int step) const;
  void set_total_updates(int n) { total_updates_ = n; }
  int total_updates() const { return total_updates_; }

  /// One MAPPO update over a full-episode batch. Only roles in `trained`
  /// are touched. Deterministic for a fixed batch.
  TrainStats update(const EpisodeBatch& batch, int step_index,
                    const std::set<Role>& trained);

  /// Versioned little-endian checkpoint; reload reproduces forward passes
  /// bitwise. Throws CheckpointError naming the first mismatching layer.
  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

  std::uint64_t train_step() const { return train_step_; }

 private:
  int role_cardinality(Role role) const;

  ScenarioConfig cfg_;
  std::vector<AgentId> agents_;
  std::vector<Actor> actors_;
  std::vector<Critic> critics_;  ///< indexed by Role
  std::vector<AdamOptimizer> actor_opts_;
  std::vector<AdamOptimizer> critic_opts_;
  int total_updates_ = 1;
  std::uint64_t train_step_ = 0;
};

}  // namespace entisac
