#include "entisac/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entisac/errors.hpp"
#include "entisac/kinematics.hpp"

namespace entisac {

namespace {

constexpr double kPowerTol = 1e-9;

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

int clamp_angle_index(double raw, int delta_theta) {
  const long idx = std::llround(raw);
  return static_cast<int>(std::min<long>(delta_theta - 1, std::max<long>(0, idx)));
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

bool ServicePartition::user_federated(int cell, int user) const {
  return contains(fed_users[cell], user);
}

bool ServicePartition::target_federated(int cell, int target) const {
  return contains(fed_targets[cell], target);
}

int Grouping::cluster_of(int cell) const {
  for (int r = 0; r < static_cast<int>(clusters.size()); ++r) {
    if (contains(clusters[r], cell)) return r;
  }
  throw std::logic_error("cluster_of: cell not present in any cluster");
}

int BeamPowerPlan::subband_slot(int subband) const {
  for (int si = 0; si < static_cast<int>(subbands.size()); ++si) {
    if (subbands[si] == subband) return si;
  }
  throw std::logic_error("subband not served by this plan");
}

const Eigen::VectorXcd& BeamPowerPlan::comm_beam(int a, int k, int subband) const {
  return comm_beams[subband_slot(subband)][a * comm_power.cols() + k];
}

const Eigen::VectorXcd& BeamPowerPlan::radar_beam(int a, int q) const {
  return radar_beams[a * radar_power.cols() + q];
}

BeamPowerPlan BeamPowerPlan::empty(Regime regime, int d, std::vector<int> subbands,
                                   int num_aps, int num_users, int num_targets) {
  BeamPowerPlan plan;
  plan.regime = regime;
  plan.d = d;
  plan.subbands = std::move(subbands);
  plan.comm_power = Eigen::MatrixXd::Zero(num_aps, num_users);
  plan.radar_power = Eigen::MatrixXd::Zero(num_aps, num_targets);
  plan.comm_angle = Eigen::MatrixXi::Constant(num_aps, num_users, -1);
  plan.radar_angle = Eigen::MatrixXi::Constant(num_aps, num_targets, -1);
  plan.comm_beams.assign(plan.subbands.size(),
                         std::vector<Eigen::VectorXcd>(num_aps * num_users));
  plan.radar_beams.assign(num_aps * num_targets, Eigen::VectorXcd());
  return plan;
}

LcpDecision decode_lcp(const Eigen::VectorXd& raw, int cell, const ScenarioConfig& cfg) {
  const int expect = cfg.k + cfg.q + cfg.a + 1;
  if (raw.size() != expect) {
    throw InterfaceError("decode_lcp: raw action length " + std::to_string(raw.size()) +
                         ", expected " + std::to_string(expect));
  }
  LcpDecision d;
  for (int j = 0; j < cfg.k; ++j) {
    const int user = cell * cfg.k + j;
    (clamp(raw[j], 0.0, 1.0) > 0.5 ? d.fed_users : d.local_users).push_back(user);
  }
  for (int j = 0; j < cfg.q; ++j) {
    const int tgt = cell * cfg.q + j;
    (clamp(raw[cfg.k + j], 0.0, 1.0) > 0.5 ? d.fed_targets : d.local_targets).push_back(tgt);
  }
  d.p_local.resize(cfg.a);
  for (int j = 0; j < cfg.a; ++j) {
    d.p_local[j] = clamp(raw[cfg.k + cfg.q + j], 0.0, cfg.p_max);
  }
  const double bw = clamp(raw[cfg.k + cfg.q + cfg.a], 0.0, static_cast<double>(cfg.b));
  d.b_local = static_cast<int>(std::min<double>(cfg.b, std::max(0.0, std::ceil(bw))));
  return d;
}

ServicePartition assemble_partition(const std::vector<LcpDecision>& decisions,
                                    const ScenarioConfig& cfg) {
  ServicePartition p;
  p.local_users.resize(cfg.m);
  p.fed_users.resize(cfg.m);
  p.local_targets.resize(cfg.m);
  p.fed_targets.resize(cfg.m);
  for (int m = 0; m < cfg.m; ++m) {
    p.local_users[m] = decisions[m].local_users;
    p.fed_users[m] = decisions[m].fed_users;
    p.local_targets[m] = decisions[m].local_targets;
    p.fed_targets[m] = decisions[m].fed_targets;
  }
  return p;
}

ResourceSplit assemble_split(const std::vector<LcpDecision>& decisions,
                             const ScenarioConfig& cfg) {
  ResourceSplit s;
  s.b_local.resize(cfg.m);
  s.b_fed.resize(cfg.m);
  s.p_local.resize(cfg.num_aps());
  s.p_fed.resize(cfg.num_aps());
  for (int m = 0; m < cfg.m; ++m) {
    s.b_local[m] = decisions[m].b_local;
    s.b_fed[m] = cfg.b - decisions[m].b_local;
    for (int j = 0; j < cfg.a; ++j) {
      const int a = m * cfg.a + j;
      s.p_local[a] = decisions[m].p_local[j];
      s.p_fed[a] = cfg.p_max - decisions[m].p_local[j];
    }
  }
  return s;
}

Grouping decode_fg(const std::vector<int>& labels, int num_clusters, int m_max) {
  Grouping g;
  g.clusters.assign(num_clusters, {});
  for (int cell = 0; cell < static_cast<int>(labels.size()); ++cell) {
    const int r = std::min(num_clusters - 1, std::max(0, labels[cell]));
    g.clusters[r].push_back(cell);
  }
  // Deterministic repair of oversized clusters: overflow cells, highest index
  // first, move to the least-loaded cluster with spare capacity.
  for (int r = 0; r < num_clusters; ++r) {
    while (static_cast<int>(g.clusters[r].size()) > m_max) {
      const int cell = g.clusters[r].back();
      g.clusters[r].pop_back();
      int best = -1;
      for (int r2 = 0; r2 < num_clusters; ++r2) {
        if (r2 == r || static_cast<int>(g.clusters[r2].size()) >= m_max) continue;
        if (best < 0 || g.clusters[r2].size() < g.clusters[best].size()) best = r2;
      }
      if (best < 0) {
        throw std::logic_error("decode_fg: no cluster can absorb overflow (r*m_max < m?)");
      }
      g.clusters[best].push_back(cell);
    }
  }
  for (auto& c : g.clusters) std::sort(c.begin(), c.end());
  return g;
}

Eigen::VectorXd project_power_simplex(const Eigen::VectorXd& raw,
                                      const std::vector<int>& subband_weights,
                                      double budget) {
  Eigen::VectorXd p = raw.cwiseMax(0.0);
  if (budget <= 0.0) return Eigen::VectorXd::Zero(p.size());
  double total_w = 0.0;
  for (int w : subband_weights) total_w += w;
  const double weighted = total_w * p.sum();
  if (weighted <= budget) return p;
  return p * (budget / weighted);
}

RegimeContext make_local_context(int cell, const ServicePartition& partition,
                                 const ScenarioConfig& cfg) {
  RegimeContext ctx;
  ctx.regime = Regime::Local;
  ctx.d = cell;
  for (int j = 0; j < cfg.a; ++j) ctx.aps.push_back(cell * cfg.a + j);
  ctx.comm_users = partition.local_users[cell];
  ctx.targets = partition.local_targets[cell];
  ctx.subbands = {cell};
  return ctx;
}

RegimeContext make_federated_context(int cluster, const ServicePartition& partition,
                                     const Grouping& grouping, const ScenarioConfig& cfg) {
  RegimeContext ctx;
  ctx.regime = Regime::Federated;
  ctx.d = cluster;
  for (int m : grouping.clusters[cluster]) {
    for (int j = 0; j < cfg.a; ++j) ctx.aps.push_back(m * cfg.a + j);
    ctx.comm_users.insert(ctx.comm_users.end(), partition.fed_users[m].begin(),
                          partition.fed_users[m].end());
    ctx.targets.insert(ctx.targets.end(), partition.fed_targets[m].begin(),
                       partition.fed_targets[m].end());
    ctx.subbands.push_back(m);
  }
  return ctx;
}

BeamPowerPlan decode_beam_power(const Eigen::VectorXd& raw, Regime regime,
                                const RegimeContext& ctx, const ResourceSplit& split,
                                const ChannelBook& book, const ScenarioConfig& cfg) {
  const int num_aps = cfg.num_aps();
  const int num_users = cfg.num_users();
  const int num_targets = cfg.num_targets();
  BeamPowerPlan plan = BeamPowerPlan::empty(regime, ctx.d, ctx.subbands, num_aps,
                                            num_users, num_targets);

  // Raw layout: per action-AP block, powers for every addressable entity
  // followed by angle levels in the same order. The local action addresses
  // only its own cell's entities; the federated action addresses all of them.
  const bool local = regime == Regime::Local;
  const int ent_users = local ? cfg.k : num_users;
  const int ent_targets = local ? cfg.q : num_targets;
  const int ent = ent_users + ent_targets;
  const std::vector<int>& action_aps = ctx.aps;
  const int num_action_aps = local ? cfg.a : num_aps;
  const long expect = static_cast<long>(num_action_aps) * 2 * ent;
  if (raw.size() != expect) {
    throw InterfaceError("decode_beam_power: raw action length " +
                         std::to_string(raw.size()) + ", expected " + std::to_string(expect));
  }

  std::vector<int> weights;
  for (int i : ctx.subbands) {
    weights.push_back(local ? split.b_local[i] : split.b_fed[i]);
  }

  auto global_user = [&](int slot) { return local ? ctx.d * cfg.k + slot : slot; };
  auto global_target = [&](int slot) { return local ? ctx.d * cfg.q + slot : slot; };
  auto block_of_ap = [&](int a) {
    if (local) return a - ctx.d * cfg.a;
    return a;
  };

  for (int a : action_aps) {
    const int blk = block_of_ap(a);
    const double budget = local ? split.p_local[a] : split.p_fed[a];
    const long base = static_cast<long>(blk) * 2 * ent;

    Eigen::VectorXd powers = Eigen::VectorXd::Zero(ent);
    for (int e = 0; e < ent; ++e) {
      const bool is_user = e < ent_users;
      const int gid = is_user ? global_user(e) : global_target(e - ent_users);
      const bool served = is_user ? contains(ctx.comm_users, gid) : contains(ctx.targets, gid);
      if (!served) continue;  // indicator constraint: zero outside serving set
      powers[e] = clamp(raw[base + e], 0.0, budget);
    }
    powers = project_power_simplex(powers, weights, budget);

    for (int e = 0; e < ent; ++e) {
      const bool is_user = e < ent_users;
      const int gid = is_user ? global_user(e) : global_target(e - ent_users);
      const bool served = is_user ? contains(ctx.comm_users, gid) : contains(ctx.targets, gid);
      if (!served) continue;
      const int angle_idx = clamp_angle_index(raw[base + ent + e], cfg.delta_theta);
      const double theta = cfg.grid_angle(angle_idx);
      if (is_user) {
        plan.comm_power(a, gid) = powers[e];
        plan.comm_angle(a, gid) = angle_idx;
        const Eigen::VectorXcd v = steering(theta, cfg.n_tx);
        for (int si = 0; si < static_cast<int>(ctx.subbands.size()); ++si) {
          const int i = ctx.subbands[si];
          const std::complex<double> inner = book.estimate(a, gid, i).dot(v);
          const double phase = std::arg(inner);
          plan.comm_beams[si][a * num_users + gid] =
              v * std::exp(std::complex<double>(0.0, -phase));
        }
      } else {
        plan.radar_power(a, gid) = powers[e];
        plan.radar_angle(a, gid) = angle_idx;
        plan.radar_beams[a * num_targets + gid] = steering(theta, cfg.n_tx);
      }
    }
  }
  return plan;
}

std::vector<std::string> validate_topology(const ServicePartition& partition,
                                           const ResourceSplit& split,
                                           const Grouping& grouping,
                                           const std::vector<BeamPowerPlan>& plans,
                                           const ScenarioConfig& cfg) {
  std::vector<std::string> violations;
  auto flag = [&violations](const std::string& id) {
    if (std::find(violations.begin(), violations.end(), id) == violations.end()) {
      violations.push_back(id);
    }
  };

  auto check_partition = [&](const std::vector<int>& local, const std::vector<int>& fed,
                             int first, int count) {
    std::vector<int> all = local;
    all.insert(all.end(), fed.begin(), fed.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      flag("service partition disjointness");
    }
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<int> expect(count);
    std::iota(expect.begin(), expect.end(), first);
    if (all != expect) flag("service partition exhaustiveness");
  };
  for (int m = 0; m < cfg.m; ++m) {
    check_partition(partition.local_users[m], partition.fed_users[m], m * cfg.k, cfg.k);
    check_partition(partition.local_targets[m], partition.fed_targets[m], m * cfg.q, cfg.q);
  }

  for (int m = 0; m < cfg.m; ++m) {
    if (split.b_local[m] < 0 || split.b_fed[m] < 0 || split.b_local[m] + split.b_fed[m] != cfg.b) {
      flag("bandwidth split");
    }
  }
  for (int a = 0; a < cfg.num_aps(); ++a) {
    if (split.p_local[a] < -kPowerTol || split.p_fed[a] < -kPowerTol ||
        std::abs(split.p_local[a] + split.p_fed[a] - cfg.p_max) > kPowerTol) {
      flag("power split");
    }
  }

  std::vector<int> covered;
  for (const auto& cells : grouping.clusters) {
    if (static_cast<int>(cells.size()) > cfg.m_max) flag("CFN size cap");
    covered.insert(covered.end(), cells.begin(), cells.end());
  }
  std::sort(covered.begin(), covered.end());
  if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) {
    flag("CFN disjointness");
  } else {
    std::vector<int> expect_cells;
    for (int m = 0; m < cfg.m; ++m) expect_cells.push_back(m);
    if (covered != expect_cells) flag("CFN coverage");
  }

  for (const auto& plan : plans) {
    const bool local = plan.regime == Regime::Local;
    if (plan.comm_power.minCoeff() < 0.0 || plan.radar_power.minCoeff() < 0.0) {
      flag("negative power");
    }
    // Indicator constraints and budgets need the serving sets.
    RegimeContext ctx = local
        ? make_local_context(plan.d, partition, cfg)
        : make_federated_context(plan.d, partition, grouping, cfg);
    double band_weight = 0.0;
    for (int i : ctx.subbands) band_weight += local ? split.b_local[i] : split.b_fed[i];
    for (int a = 0; a < cfg.num_aps(); ++a) {
      const bool serving = contains(ctx.aps, a);
      const double budget = local ? split.p_local[a] : split.p_fed[a];
      double total = 0.0;
      for (int k = 0; k < cfg.num_users(); ++k) {
        const double p = plan.comm_power(a, k);
        if (p == 0.0) continue;
        if (!serving || !contains(ctx.comm_users, k)) {
          flag(local ? "local power outside serving set" : "federated power outside serving set");
        }
        if (band_weight * p > budget + kPowerTol) {
          flag(local ? "per-entity local power" : "per-entity federated power");
        }
        total += p;
      }
      for (int q = 0; q < cfg.num_targets(); ++q) {
        const double p = plan.radar_power(a, q);
        if (p == 0.0) continue;
        if (!serving || !contains(ctx.targets, q)) {
          flag(local ? "local power outside serving set" : "federated power outside serving set");
        }
        if (band_weight * p > budget + kPowerTol) {
          flag(local ? "per-entity local power" : "per-entity federated power");
        }
        total += p;
      }
      if (band_weight * total > budget + kPowerTol) {
        flag(local ? "per-AP local power" : "per-AP federated power");
      }
    }
  }
  return violations;
}

}  // namespace entisac
