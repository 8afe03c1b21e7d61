#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "entisac/environment.hpp"
#include "entisac/rng.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

enum class BaselineKind { CcnOnly, CfnOnly, RandomMrt };

const char* baseline_name(BaselineKind kind);

/// Grid level whose steering vector best matches the channel (maximum-ratio
/// quantization).
int best_grid_angle(const Eigen::VectorXcd& channel, const ScenarioConfig& cfg);

/// Grid level closest to a geometric angle.
int nearest_grid_angle(double theta, const ScenarioConfig& cfg);

// Forced actions of the restricted schemes. The counterpart roles (LPB for
// CCN-only; FG/FPB for CFN-only) come from trained policies.
std::vector<Eigen::VectorXd> ccn_only_lcp_actions(const ScenarioConfig& cfg);
Eigen::VectorXd ccn_only_fg_action(const ScenarioConfig& cfg);
std::vector<Eigen::VectorXd> ccn_only_fpb_actions(const ScenarioConfig& cfg);
std::vector<Eigen::VectorXd> cfn_only_lcp_actions(const ScenarioConfig& cfg);
std::vector<Eigen::VectorXd> cfn_only_lpb_actions(const ScenarioConfig& cfg);

/// Non-learning reference: random local/federated classification, even
/// resource splits, equal power over served entities, and maximum-ratio
/// beams quantized to the angle grid (radar beams point at the predicted
/// target angle).
class RandomMrtPolicy {
 public:
  explicit RandomMrtPolicy(std::uint64_t seed) : rng_(RandomStream::child(seed, "random_mrt")) {}

  std::vector<Eigen::VectorXd> lcp_actions(const Environment& env);
  std::vector<Eigen::VectorXd> lpb_actions(const Environment& env) const;
  Eigen::VectorXd fg_action(const Environment& env);
  std::vector<Eigen::VectorXd> fpb_actions(const Environment& env) const;

 private:
  RandomStream rng_;
};

}  // namespace entisac
