#include "entisac/baselines.hpp"

#include <cmath>

#include "entisac/kinematics.hpp"

namespace entisac {

const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::CcnOnly: return "ccn";
    case BaselineKind::CfnOnly: return "cfn";
    case BaselineKind::RandomMrt: return "random";
  }
  return "?";
}

int best_grid_angle(const Eigen::VectorXcd& channel, const ScenarioConfig& cfg) {
  int best = 0;
  double best_gain = -1.0;
  for (int j = 0; j < cfg.delta_theta; ++j) {
    const double gain = std::abs(channel.dot(steering(cfg.grid_angle(j), cfg.n_tx)));
    if (gain > best_gain) {
      best_gain = gain;
      best = j;
    }
  }
  return best;
}

int nearest_grid_angle(double theta, const ScenarioConfig& cfg) {
  int best = 0;
  double best_dist = std::abs(cfg.grid_angle(0) - theta);
  for (int j = 1; j < cfg.delta_theta; ++j) {
    const double dist = std::abs(cfg.grid_angle(j) - theta);
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

std::vector<Eigen::VectorXd> ccn_only_lcp_actions(const ScenarioConfig& cfg) {
  std::vector<Eigen::VectorXd> actions;
  for (int m = 0; m < cfg.m; ++m) {
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cfg.k + cfg.q + cfg.a + 1);
    raw.segment(cfg.k + cfg.q, cfg.a).setConstant(cfg.p_max);  // all power dedicated
    raw[cfg.k + cfg.q + cfg.a] = static_cast<double>(cfg.b);   // all bandwidth dedicated
    actions.push_back(raw);
  }
  return actions;
}

Eigen::VectorXd ccn_only_fg_action(const ScenarioConfig& cfg) {
  return Eigen::VectorXd::Zero(cfg.m);
}

std::vector<Eigen::VectorXd> ccn_only_fpb_actions(const ScenarioConfig& cfg) {
  std::vector<Eigen::VectorXd> actions;
  for (int r = 0; r < cfg.r; ++r) {
    actions.push_back(Eigen::VectorXd::Zero(cfg.num_aps() * 2 * cfg.m * (cfg.k + cfg.q)));
  }
  return actions;
}

std::vector<Eigen::VectorXd> cfn_only_lcp_actions(const ScenarioConfig& cfg) {
  std::vector<Eigen::VectorXd> actions;
  for (int m = 0; m < cfg.m; ++m) {
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cfg.k + cfg.q + cfg.a + 1);
    raw.head(cfg.k + cfg.q).setOnes();  // every service federated
    // Power and bandwidth entries stay zero: everything goes to the shared pool.
    actions.push_back(raw);
  }
  return actions;
}

std::vector<Eigen::VectorXd> cfn_only_lpb_actions(const ScenarioConfig& cfg) {
  std::vector<Eigen::VectorXd> actions;
  for (int m = 0; m < cfg.m; ++m) {
    actions.push_back(Eigen::VectorXd::Zero(cfg.a * 2 * (cfg.k + cfg.q)));
  }
  return actions;
}

std::vector<Eigen::VectorXd> RandomMrtPolicy::lcp_actions(const Environment& env) {
  const ScenarioConfig& cfg = env.config();
  std::vector<Eigen::VectorXd> actions;
  for (int m = 0; m < cfg.m; ++m) {
    Eigen::VectorXd raw(cfg.k + cfg.q + cfg.a + 1);
    for (int i = 0; i < cfg.k + cfg.q; ++i) {
      raw[i] = rng_.uniform() < 0.5 ? 0.0 : 1.0;
    }
    raw.segment(cfg.k + cfg.q, cfg.a).setConstant(cfg.p_max / 2.0);
    raw[cfg.k + cfg.q + cfg.a] = cfg.b / 2.0;
    actions.push_back(raw);
  }
  return actions;
}

std::vector<Eigen::VectorXd> RandomMrtPolicy::lpb_actions(const Environment& env) const {
  const ScenarioConfig& cfg = env.config();
  const ServicePartition& part = env.partition();
  const ResourceSplit& split = env.split();
  std::vector<Eigen::VectorXd> actions;
  for (int m = 0; m < cfg.m; ++m) {
    const int ent = cfg.k + cfg.q;
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cfg.a * 2 * ent);
    const int served =
        static_cast<int>(part.local_users[m].size() + part.local_targets[m].size());
    for (int ai = 0; ai < cfg.a; ++ai) {
      const int a = m * cfg.a + ai;
      const long base = static_cast<long>(ai) * 2 * ent;
      const double weight = static_cast<double>(split.b_local[m]);
      const double power =
          served > 0 && weight > 0.0 ? split.p_local[a] / (weight * served) : 0.0;
      for (int j = 0; j < cfg.k; ++j) {
        const int k = m * cfg.k + j;
        if (!part.user_federated(m, k)) raw[base + j] = power;
        raw[base + ent + j] = best_grid_angle(env.book().estimate(a, k, m), cfg);
      }
      for (int j = 0; j < cfg.q; ++j) {
        const int q = m * cfg.q + j;
        if (!part.target_federated(m, q)) raw[base + cfg.k + j] = power;
        const Eigen::Vector2d pred = env.predicted_state(q).head<2>();
        const double theta = relative_angle(pred, env.scenario().ap_positions[a]);
        raw[base + ent + cfg.k + j] = nearest_grid_angle(theta, cfg);
      }
    }
    actions.push_back(raw);
  }
  return actions;
}

Eigen::VectorXd RandomMrtPolicy::fg_action(const Environment& env) {
  const ScenarioConfig& cfg = env.config();
  Eigen::VectorXd raw(cfg.m);
  for (int m = 0; m < cfg.m; ++m) {
    raw[m] = static_cast<double>(rng_.uniform_int(0, cfg.r - 1));
  }
  return raw;
}

std::vector<Eigen::VectorXd> RandomMrtPolicy::fpb_actions(const Environment& env) const {
  const ScenarioConfig& cfg = env.config();
  const ServicePartition& part = env.partition();
  const ResourceSplit& split = env.split();
  const Grouping& grouping = env.grouping();
  std::vector<Eigen::VectorXd> actions;
  const int ent = cfg.m * (cfg.k + cfg.q);
  for (int r = 0; r < cfg.r; ++r) {
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cfg.num_aps() * 2 * ent);
    const auto& cells = grouping.clusters[r];
    std::vector<int> fed_users, fed_targets;
    double weight = 0.0;
    for (int m : cells) {
      fed_users.insert(fed_users.end(), part.fed_users[m].begin(), part.fed_users[m].end());
      fed_targets.insert(fed_targets.end(), part.fed_targets[m].begin(),
                         part.fed_targets[m].end());
      weight += split.b_fed[m];
    }
    const int served = static_cast<int>(fed_users.size() + fed_targets.size());
    for (int m : cells) {
      for (int ai = 0; ai < cfg.a; ++ai) {
        const int a = m * cfg.a + ai;
        const long base = static_cast<long>(a) * 2 * ent;
        const double power =
            served > 0 && weight > 0.0 ? split.p_fed[a] / (weight * served) : 0.0;
        for (int k : fed_users) {
          raw[base + k] = power;
          // Maximum-ratio direction pooled over the cluster's subbands.
          int best = 0;
          double best_gain = -1.0;
          for (int j = 0; j < cfg.delta_theta; ++j) {
            const Eigen::VectorXcd v = steering(cfg.grid_angle(j), cfg.n_tx);
            double gain = 0.0;
            for (int i : cells) gain += std::norm(env.book().estimate(a, k, i).dot(v));
            if (gain > best_gain) {
              best_gain = gain;
              best = j;
            }
          }
          raw[base + ent + k] = best;
        }
        for (int q : fed_targets) {
          raw[base + cfg.m * cfg.k + q] = power;
          const Eigen::Vector2d pred = env.predicted_state(q).head<2>();
          const double theta = relative_angle(pred, env.scenario().ap_positions[a]);
          raw[base + ent + cfg.m * cfg.k + q] = nearest_grid_angle(theta, cfg);
        }
      }
    }
    actions.push_back(raw);
  }
  return actions;
}

}  // namespace entisac
