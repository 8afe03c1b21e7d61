#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entisac/accounting.hpp"
#include "entisac/channel.hpp"
#include "entisac/scenario.hpp"
#include "entisac/sensing_metrics.hpp"
#include "entisac/topology.hpp"

namespace entisac {

enum class Role { Lcp, Lpb, Fg, Fpb };

const char* role_name(Role role);

struct AgentId {
  Role role = Role::Lcp;
  int index = 0;
};

/// Per-frame record of everything the accounting and the learning loop need.
struct FrameDiagnostics {
  int frame = 0;
  double utility = 0.0;
  double utility_comm = 0.0;
  double utility_sense = 0.0;
  double overhead = 0.0;
  double usr = 0.0;
  double reward = 0.0;
  Eigen::VectorXd user_rate;        ///< raw nats/s/Hz, global user order
  Eigen::VectorXd user_utility;     ///< normalized
  Eigen::VectorXd target_pos_err;   ///< m^2
  Eigen::VectorXd target_vel_err;   ///< (m/s)^2
  Eigen::VectorXd target_utility;
  std::vector<int> user_federated;    ///< 0/1
  std::vector<int> target_federated;  ///< 0/1
  std::vector<long> o1, o2;         ///< per cell
  std::vector<long> o_fed;          ///< per cluster
  std::vector<int> slots_local;     ///< per cell
  std::vector<int> slots_fed;       ///< per cluster
};

struct StepResult {
  double reward = 0.0;
  bool done = false;
  FrameDiagnostics diag;
  /// Classification-agent observations for the next frame; empty when done.
  std::vector<Eigen::VectorXd> next_lcp_obs;
};

/// All agents' raw actions for one frame.
struct JointAction {
  std::vector<Eigen::VectorXd> lcp;  ///< one per cell
  std::vector<Eigen::VectorXd> lpb;  ///< one per cell
  Eigen::VectorXd fg;                ///< cluster label per cell
  std::vector<Eigen::VectorXd> fpb;  ///< one per cluster
};

// Flat observation layouts. Complex values appear as (re, im) pairs; channels
// are scaled by 1/sqrt(lambda), positions by 1/area, error variances by the
// no-pilot ceiling, and information-matrix entries by sign(x) log10(1+|x|).
int lcp_obs_dim(const ScenarioConfig& cfg);
int lpb_obs_dim(const ScenarioConfig& cfg);
int report_slot_dim(const ScenarioConfig& cfg);
int fg_obs_dim(const ScenarioConfig& cfg);
int fpb_obs_dim(const ScenarioConfig& cfg);

// Raw action vector lengths per role.
int lcp_action_dim(const ScenarioConfig& cfg);
int lpb_action_dim(const ScenarioConfig& cfg);
int fg_action_dim(const ScenarioConfig& cfg);
int fpb_action_dim(const ScenarioConfig& cfg);

/// The two-phase frame protocol as an agent-stepped environment. Within a
/// frame the stages are strictly ordered: classification (LCP), local
/// provisioning (LPB), grouping (FG, which triggers federated estimation),
/// federated provisioning (FPB), then settlement. Observations are only
/// available once their stage's inputs exist.
class Environment {
 public:
  Environment(Scenario scenario, std::uint64_t seed);

  void reset(std::uint64_t seed);
  void reset(const Scenario& scenario, std::uint64_t seed);

  /// Observation for an agent at the current frame. Throws CausalityError if
  /// requested before the protocol stage that defines it.
  Eigen::VectorXd observe(const AgentId& agent) const;

  void submit_lcp(const std::vector<Eigen::VectorXd>& raw);
  void submit_lpb(const std::vector<Eigen::VectorXd>& raw);
  void submit_fg(const Eigen::VectorXd& raw);
  void submit_fpb(const std::vector<Eigen::VectorXd>& raw);

  /// Settles the frame: metrics, belief updates, accounting, reward, and
  /// physics advance into the next frame.
  StepResult finish_frame();

  /// Runs all four stages and the settlement in protocol order.
  StepResult step(const JointAction& actions);

  // Read-only views for policies, diagnostics, and tests.
  const Scenario& scenario() const { return scenario_; }
  const ScenarioConfig& config() const { return scenario_.config; }
  const ChannelBook& book() const { return book_; }
  int frame() const { return frame_; }
  bool done() const { return done_; }
  const ServicePartition& partition() const;
  const ResourceSplit& split() const;
  const Grouping& grouping() const;
  const std::vector<BeamPowerPlan>& local_plans() const;
  const std::vector<BeamPowerPlan>& federated_plans() const;
  const Eigen::Vector4d& predicted_state(int target) const;
  const SensingBelief& belief(int target) const;
  const TargetState& true_target(int target) const;

 private:
  enum class Stage { AwaitLcp, AwaitLpb, AwaitFg, AwaitFpb, AwaitSettle, Finished };

  void start_frame();
  void run_phase1_estimation();
  void run_federated_estimation();
  Eigen::VectorXd build_lcp_obs(int cell) const;
  Eigen::VectorXd build_report_slot(int cell) const;
  Eigen::VectorXd encode_lcp_action(int cell) const;
  void require_stage_at_least(Stage s, const char* what) const;

  Scenario scenario_;
  std::uint64_t seed_ = 0;
  ChannelBook book_;
  std::vector<TargetState> targets_;
  std::vector<SensingBelief> beliefs_;
  Eigen::Matrix4d transition_ = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d process_cov_ = Eigen::Matrix4d::Zero();

  RandomStream channel_rng_{0};
  RandomStream est_rng_{0};
  RandomStream motion_rng_{0};
  RandomStream posterior_rng_{0};

  int frame_ = 0;
  bool done_ = false;
  Stage stage_ = Stage::AwaitLcp;

  std::vector<LcpDecision> lcp_decisions_;
  std::vector<Eigen::VectorXd> lcp_raw_;
  ServicePartition partition_;
  ResourceSplit split_;
  Grouping grouping_;
  std::vector<BeamPowerPlan> local_plans_;
  std::vector<BeamPowerPlan> federated_plans_;
};

}  // namespace entisac
