#include <doctest.h>

#include <cmath>

#include "entisac/baselines.hpp"
#include "entisac/environment.hpp"
#include "entisac/topology.hpp"

using namespace entisac;

namespace {

ScenarioConfig desk_cfg() {
  ScenarioConfig cfg;
  cfg.m = 2;
  cfg.r = 2;
  cfg.m_max = 2;
  cfg.a = 2;
  cfg.k = 2;
  cfg.q = 2;
  cfg.n_tx = 2;
  cfg.b = 8;
  cfg.l = 20;
  cfg.n_t = 3;
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("CCN-only frames carry only the base and intra-cell overhead") {
  ScenarioConfig cfg;  // reference sizes: o = 1024, base overhead 716.8
  cfg.n_t = 1;
  cfg.validate();
  Environment env(build_scenario(cfg, 7), 13);
  JointAction ja;
  ja.lcp = ccn_only_lcp_actions(cfg);
  for (int m = 0; m < cfg.m; ++m) ja.lpb.push_back(Eigen::VectorXd::Zero(lpb_action_dim(cfg)));
  ja.fg = ccn_only_fg_action(cfg);
  ja.fpb = ccn_only_fpb_actions(cfg);
  const StepResult res = env.step(ja);
  for (long o : res.diag.o2) CHECK(o == 0);
  for (long o : res.diag.o_fed) CHECK(o == 0);
  CHECK(res.diag.overhead == doctest::Approx(4.0 * (716.8 + 32.0) / 1024.0).epsilon(1e-12));
  // No federated services, hence no federated utility contribution.
  for (int k = 0; k < cfg.num_users(); ++k) CHECK(res.diag.user_federated[k] == 0);
  for (int q = 0; q < cfg.num_targets(); ++q) CHECK(res.diag.target_federated[q] == 0);
}

TEST_CASE("CFN-only frames federate every service") {
  const ScenarioConfig cfg = desk_cfg();
  Environment env(build_scenario(cfg, 7), 13);
  JointAction ja;
  ja.lcp = cfn_only_lcp_actions(cfg);
  ja.lpb = cfn_only_lpb_actions(cfg);
  ja.fg = Eigen::VectorXd::Zero(cfg.m);  // both cells in one cluster
  for (int r = 0; r < cfg.r; ++r) {
    ja.fpb.push_back(Eigen::VectorXd::Constant(fpb_action_dim(cfg), 0.1));
  }
  const StepResult res = env.step(ja);
  for (int k = 0; k < cfg.num_users(); ++k) CHECK(res.diag.user_federated[k] == 1);
  for (int q = 0; q < cfg.num_targets(); ++q) CHECK(res.diag.target_federated[q] == 1);
  for (long o : res.diag.o2) {
    CHECK(o == cfg.k * cfg.a * cfg.n_tx + 20 * cfg.q);
  }
  // Cross-cell estimation shrinks the federated transmission window.
  CHECK(res.diag.slots_fed[0] < res.diag.slots_local[0]);
}

TEST_CASE("random-MRT emits balanced classification bits deterministically") {
  const ScenarioConfig cfg = desk_cfg();
  const Scenario sc = build_scenario(cfg, 7);
  Environment env(sc, 13);

  RandomMrtPolicy pol_a(55);
  RandomMrtPolicy pol_b(55);
  long ones = 0, total = 0;
  std::vector<Eigen::VectorXd> first_a, first_b;
  for (int trial = 0; trial < 1250; ++trial) {
    const auto actions_a = pol_a.lcp_actions(env);
    const auto actions_b = pol_b.lcp_actions(env);
    if (trial == 0) {
      first_a = actions_a;
      first_b = actions_b;
    }
    for (int m = 0; m < cfg.m; ++m) {
      for (int i = 0; i < cfg.k + cfg.q; ++i) {
        ones += actions_a[m][i] > 0.5 ? 1 : 0;
        ++total;
      }
    }
  }
  CHECK(total == 10000);
  CHECK(std::abs(static_cast<double>(ones) / total - 0.5) < 0.02);
  for (int m = 0; m < cfg.m; ++m) CHECK((first_a[m] - first_b[m]).norm() == 0.0);
}

TEST_CASE("random-MRT actions decode to feasible, budget-binding plans") {
  const ScenarioConfig cfg = desk_cfg();
  Environment env(build_scenario(cfg, 7), 13);
  RandomMrtPolicy pol(56);

  env.submit_lcp(pol.lcp_actions(env));
  env.submit_lpb(pol.lpb_actions(env));
  env.submit_fg(pol.fg_action(env));
  env.submit_fpb(pol.fpb_actions(env));

  std::vector<BeamPowerPlan> plans = env.local_plans();
  for (const auto& plan : env.federated_plans()) plans.push_back(plan);
  const auto violations =
      validate_topology(env.partition(), env.split(), env.grouping(), plans, cfg);
  CHECK(violations.empty());

  // Equal split saturates each serving AP's budget when anything is served.
  const ServicePartition& part = env.partition();
  const ResourceSplit& split = env.split();
  for (int m = 0; m < cfg.m; ++m) {
    const int served =
        static_cast<int>(part.local_users[m].size() + part.local_targets[m].size());
    if (served == 0 || split.b_local[m] == 0) continue;
    for (int ai = 0; ai < cfg.a; ++ai) {
      const int a = m * cfg.a + ai;
      const double radiated = env.local_plans()[m].comm_power.row(a).sum() +
                              env.local_plans()[m].radar_power.row(a).sum();
      CHECK(split.b_local[m] * radiated ==
            doctest::Approx(split.p_local[a]).epsilon(1e-9));
    }
  }
  env.finish_frame();
}

TEST_CASE("MRT helpers pick the strongest grid level") {
  ScenarioConfig cfg = desk_cfg();
  RandomStream rng(57);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXcd h = rng.cnormal_vector(cfg.n_tx, 1.0);
    const int best = best_grid_angle(h, cfg);
    const double best_gain = std::abs(h.dot(steering(cfg.grid_angle(best), cfg.n_tx)));
    for (int j = 0; j < cfg.delta_theta; ++j) {
      CHECK(best_gain >= std::abs(h.dot(steering(cfg.grid_angle(j), cfg.n_tx))) - 1e-12);
    }
    const double theta = rng.uniform(-1.5, 1.5);
    const int near = nearest_grid_angle(theta, cfg);
    for (int j = 0; j < cfg.delta_theta; ++j) {
      CHECK(std::abs(cfg.grid_angle(near) - theta) <=
            std::abs(cfg.grid_angle(j) - theta) + 1e-12);
    }
  }
}
