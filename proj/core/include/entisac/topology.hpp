#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entisac/channel.hpp"
#include "entisac/regime.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

/// Per-cell split of services into local and federated sets (global indices).
struct ServicePartition {
  std::vector<std::vector<int>> local_users;   ///< per cell
  std::vector<std::vector<int>> fed_users;     ///< per cell
  std::vector<std::vector<int>> local_targets; ///< per cell
  std::vector<std::vector<int>> fed_targets;   ///< per cell

  bool user_federated(int cell, int user) const;
  bool target_federated(int cell, int target) const;
};

/// Per-cell subcarrier split and per-AP power split between regimes.
struct ResourceSplit {
  std::vector<int> b_local;  ///< per cell
  std::vector<int> b_fed;    ///< per cell, b_local + b_fed = B
  Eigen::VectorXd p_local;   ///< per AP
  Eigen::VectorXd p_fed;     ///< per AP, p_local + p_fed = P_max
};

/// Assignment of cells to clusters; clusters partition the cell set.
struct Grouping {
  std::vector<std::vector<int>> clusters;  ///< cell indices per cluster, sorted

  int cluster_of(int cell) const;
};

/// Powers, grid beam angles, and derived beam vectors for one regime domain.
/// Powers are zero for entities outside the serving sets; communication
/// beams carry the per-subband coherent-combining phase.
struct BeamPowerPlan {
  Regime regime = Regime::Local;
  int d = 0;
  std::vector<int> subbands;

  Eigen::MatrixXd comm_power;   ///< (num_aps x num_users), W per subcarrier
  Eigen::MatrixXd radar_power;  ///< (num_aps x num_targets)
  Eigen::MatrixXi comm_angle;   ///< grid level index, -1 where unset
  Eigen::MatrixXi radar_angle;

  /// comm_beams[si][a * num_users + k]; si indexes `subbands`.
  std::vector<std::vector<Eigen::VectorXcd>> comm_beams;
  /// radar_beams[a * num_targets + q]; subband-independent.
  std::vector<Eigen::VectorXcd> radar_beams;

  int subband_slot(int subband) const;
  const Eigen::VectorXcd& comm_beam(int a, int k, int subband) const;
  const Eigen::VectorXcd& radar_beam(int a, int q) const;

  static BeamPowerPlan empty(Regime regime, int d, std::vector<int> subbands,
                             int num_aps, int num_users, int num_targets);
};

/// One cell's decoded classification and resource-partition action.
struct LcpDecision {
  std::vector<int> local_users, fed_users;      ///< global indices
  std::vector<int> local_targets, fed_targets;  ///< global indices
  Eigen::VectorXd p_local;                      ///< per local AP slot
  int b_local = 0;
};

/// Decodes a raw [K bits | Q bits | A powers | bandwidth] vector for a cell.
/// Out-of-box components are clamped, never rejected.
LcpDecision decode_lcp(const Eigen::VectorXd& raw, int cell, const ScenarioConfig& cfg);

/// Builds the per-cell partition/split aggregates from M decoded actions.
ServicePartition assemble_partition(const std::vector<LcpDecision>& decisions,
                                    const ScenarioConfig& cfg);
ResourceSplit assemble_split(const std::vector<LcpDecision>& decisions,
                             const ScenarioConfig& cfg);

/// Clusters from per-cell labels in {0..R-1}. Oversized clusters are repaired
/// deterministically: overflow cells (highest index first) move to the
/// least-loaded cluster.
Grouping decode_fg(const std::vector<int>& labels, int num_clusters, int m_max);

/// Multiplicative rescale onto the budget-feasible set: identity when
/// (sum of weights) * (sum of powers) <= budget, otherwise scaled to equality.
Eigen::VectorXd project_power_simplex(const Eigen::VectorXd& raw,
                                      const std::vector<int>& subband_weights,
                                      double budget);

/// Local and federated context builders from decoded topology.
RegimeContext make_local_context(int cell, const ServicePartition& partition,
                                 const ScenarioConfig& cfg);
RegimeContext make_federated_context(int cluster, const ServicePartition& partition,
                                     const Grouping& grouping, const ScenarioConfig& cfg);

/// Decodes per-AP power/angle blocks into a feasible plan for one domain.
/// Powers are clamped, zeroed outside the serving set, then simplex-projected
/// against the per-AP regime budget.
BeamPowerPlan decode_beam_power(const Eigen::VectorXd& raw, Regime regime,
                                const RegimeContext& ctx, const ResourceSplit& split,
                                const ChannelBook& book, const ScenarioConfig& cfg);

/// Checks every topology/resource constraint: partition exhaustiveness and
/// disjointness, split sums, grouping validity and size cap, indicator and
/// per-AP power budgets (1e-9 tolerance on power sums). Returns violation
/// identifiers, empty when feasible.
std::vector<std::string> validate_topology(const ServicePartition& partition,
                                           const ResourceSplit& split,
                                           const Grouping& grouping,
                                           const std::vector<BeamPowerPlan>& plans,
                                           const ScenarioConfig& cfg);

}  // namespace entisac
