#pragma once

#include <vector>

#include <Eigen/Dense>

#include "entisac/mlp.hpp"
#include "entisac/rng.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

enum class ComponentKind { Binary, Categorical, Continuous };

struct ActionComponent {
  ComponentKind kind = ComponentKind::Binary;
  int levels = 0;          ///< categorical cardinality
  double lo = 0.0, hi = 1.0;  ///< continuous box
};

/// Mixed discrete-continuous action layout; one raw action entry per
/// component (bit, level index, or box value).
struct ActionSpace {
  std::vector<ActionComponent> components;

  int action_dim() const { return static_cast<int>(components.size()); }
  int logit_dim() const;    ///< actor network output width
  int encoded_dim() const;  ///< critic encoding width (one-hot categoricals)
  int continuous_count() const;

  /// Critic-side encoding: bits verbatim, categorical one-hot, continuous
  /// mapped to [0, 1].
  Eigen::VectorXd encode(const Eigen::VectorXd& action) const;
};

struct PolicySample {
  Eigen::VectorXd action;
  double log_prob = 0.0;
  double entropy = 0.0;
};

struct PolicyEval {
  double log_prob = 0.0;
  double entropy = 0.0;
};

/// Stochastic actor over an ActionSpace: independent Bernoulli, categorical,
/// and squashed-Gaussian heads on top of one MLP. The continuous log-std is a
/// state-independent learnable parameter per component.
class Actor {
 public:
  Actor() = default;
  Actor(ActionSpace space, int obs_dim, const std::vector<int>& hidden, RandomStream& init_rng);

  const ActionSpace& space() const { return space_; }
  const Mlp& net() const { return net_; }
  int obs_dim() const { return net_.input_dim(); }
  int param_count() const { return net_.param_count() + static_cast<int>(log_std_.size()); }

  Eigen::VectorXd get_params() const;
  void set_params(const Eigen::VectorXd& flat);

  PolicySample sample(const Eigen::VectorXd& obs, RandomStream& rng) const;
  /// Greedy action: most likely bit/level, squashed mean for continuous.
  Eigen::VectorXd mode(const Eigen::VectorXd& obs) const;
  /// Log-probability and entropy of a stored action under current parameters.
  PolicyEval evaluate(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const;
  /// evaluate() that also accumulates coef_logp * dlogp/dtheta +
  /// coef_entropy * dH/dtheta into `grad` (layout of get_params()).
  PolicyEval evaluate_with_grad(const Eigen::VectorXd& obs, const Eigen::VectorXd& action,
                                double coef_logp, double coef_entropy,
                                Eigen::VectorXd& grad) const;

 private:
  PolicyEval heads(const Eigen::VectorXd& logits, const Eigen::VectorXd& action,
                   Eigen::VectorXd* d_logits_logp, Eigen::VectorXd* d_logits_ent,
                   Eigen::VectorXd* d_logstd_logp, Eigen::VectorXd* d_logstd_ent) const;

  ActionSpace space_;
  Mlp net_;
  Eigen::VectorXd log_std_;
};

/// Scalar state-action value network.
class Critic {
 public:
  Critic() = default;
  Critic(int input_dim, const std::vector<int>& hidden, RandomStream& init_rng);

  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }
  int input_dim() const { return net_.input_dim(); }
  int param_count() const { return net_.param_count(); }

  double value(const Eigen::VectorXd& input) const;
  /// Value that also accumulates coef * dV/dtheta into `grad`.
  double value_with_grad(const Eigen::VectorXd& input, double coef,
                         Eigen::VectorXd& grad) const;

 private:
  Mlp net_;
};

/// Role action spaces derived from the scenario dimensions.
ActionSpace lcp_action_space(const ScenarioConfig& cfg);
ActionSpace lpb_action_space(const ScenarioConfig& cfg);
ActionSpace fg_action_space(const ScenarioConfig& cfg);
ActionSpace fpb_action_space(const ScenarioConfig& cfg);

}  // namespace entisac
