#include "entisac/accounting.hpp"

#include <algorithm>
#include <cmath>

#include "entisac/errors.hpp"

namespace entisac {

OverheadPair phase1_overhead(int cell, const ServicePartition& partition,
                             const ScenarioConfig& cfg) {
  OverheadPair o;
  o.o1 = static_cast<long>(cfg.a - 1) * cfg.k * cfg.n_tx;
  const long fed_users = static_cast<long>(partition.fed_users[cell].size());
  const long fed_targets = static_cast<long>(partition.fed_targets[cell].size());
  // 20 entries per federated target: a 4-entry prediction and a 4x4
  // information matrix.
  o.o2 = fed_users * cfg.a * cfg.n_tx + 20 * fed_targets;
  return o;
}

long federated_overhead(int cluster, const Grouping& grouping,
                        const ServicePartition& partition, const ScenarioConfig& cfg) {
  const auto& cells = grouping.clusters[cluster];
  long cluster_users = 0;
  for (int m : cells) cluster_users += static_cast<long>(partition.fed_users[m].size());
  const long span = static_cast<long>(cells.size());

  long total = 0;
  for (int m : cells) {
    const long own = static_cast<long>(partition.fed_users[m].size());
    const long coeffs = cluster_users * span - own;
    total += coeffs * (cfg.a - 1) * cfg.n_tx;  // non-host APs to the host
    total += coeffs * cfg.a * cfg.n_tx;        // host relays all APs' CSI upward
  }
  return total;
}

double normalize_comm(double rate, double u_min, double u_max) {
  return std::clamp((rate - u_min) / (u_max - u_min), 0.0, 1.0);
}

double normalize_sense(double pos_err, double vel_err, double rp_min, double rp_max,
                       double rv_min, double rv_max) {
  if (!(pos_err > 0.0) || !(vel_err > 0.0)) {
    throw NumericError("normalize_sense: errors must be positive");
  }
  const double rp = (std::log10(rp_max) - std::log10(pos_err)) /
                    (std::log10(rp_max) - std::log10(rp_min));
  const double rv = (std::log10(rv_max) - std::log10(vel_err)) /
                    (std::log10(rv_max) - std::log10(rv_min));
  return std::clamp(std::min(rp, rv), 0.0, 1.0);
}

FrameLedger frame_totals(const std::vector<double>& comm_utilities,
                         const std::vector<double>& sense_utilities,
                         const std::vector<OverheadPair>& per_cell,
                         const std::vector<long>& per_cluster, double o_norm,
                         double o_bar_m) {
  FrameLedger ledger;
  for (double u : comm_utilities) ledger.utility_comm += u;
  for (double u : sense_utilities) ledger.utility_sense += u;
  ledger.utility = ledger.utility_comm + ledger.utility_sense;

  double raw = 0.0;
  for (const auto& o : per_cell) {
    ledger.o1.push_back(o.o1);
    ledger.o2.push_back(o.o2);
    raw += o_bar_m + static_cast<double>(o.o1) + static_cast<double>(o.o2);
  }
  for (long o : per_cluster) {
    ledger.o_fed.push_back(o);
    raw += static_cast<double>(o);
  }
  ledger.overhead = raw / o_norm;
  ledger.usr = ledger.utility / ledger.overhead;
  ledger.reward = std::log(std::max(ledger.utility, kRewardUtilityFloor)) -
                  std::log(ledger.overhead);
  return ledger;
}

}  // namespace entisac
