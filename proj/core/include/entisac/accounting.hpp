#pragma once

#include <vector>

#include "entisac/scenario.hpp"
#include "entisac/topology.hpp"

namespace entisac {

/// Utility floor applied before the reward logarithm.
inline constexpr double kRewardUtilityFloor = 1e-3;

/// Coefficient counts exchanged within one cell during Phase I:
/// non-host APs reporting own-cell CSI, and the host reporting federated
/// CSI plus per-target prediction and information entries to the CPU.
struct OverheadPair {
  long o1 = 0;
  long o2 = 0;
};

OverheadPair phase1_overhead(int cell, const ServicePartition& partition,
                             const ScenarioConfig& cfg);

/// Cross-subband CSI coefficients relayed through a cluster's host APs.
long federated_overhead(int cluster, const Grouping& grouping,
                        const ServicePartition& partition, const ScenarioConfig& cfg);

/// Min-max normalization clipped to [0, 1].
double normalize_comm(double rate, double u_min, double u_max);

/// Log-compressed min-max normalization of the sensing errors; the worse of
/// the position and velocity scores gates the utility. Errors must be
/// positive.
double normalize_sense(double pos_err, double vel_err, double rp_min, double rp_max,
                       double rv_min, double rv_max);

/// Per-frame utility/overhead ledger.
struct FrameLedger {
  std::vector<long> o1;     ///< per cell
  std::vector<long> o2;     ///< per cell
  std::vector<long> o_fed;  ///< per cluster
  double utility_comm = 0.0;
  double utility_sense = 0.0;
  double utility = 0.0;
  double overhead = 0.0;  ///< normalized total S
  double usr = 0.0;
  double reward = 0.0;
};

/// Totals: U as the sum of normalized utilities, S as the normalized ledger
/// sum, USR = U/S, reward = ln(max(U, floor)) - ln(S).
FrameLedger frame_totals(const std::vector<double>& comm_utilities,
                         const std::vector<double>& sense_utilities,
                         const std::vector<OverheadPair>& per_cell,
                         const std::vector<long>& per_cluster, double o_norm,
                         double o_bar_m);

}  // namespace entisac
