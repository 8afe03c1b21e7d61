#include <doctest.h>

#include <cmath>

#include "entisac/errors.hpp"
#include "entisac/scenario.hpp"

using namespace entisac;

TEST_CASE("reference configuration builds the expected deployment") {
  ScenarioConfig cfg;  // defaults: 4 cells, 2 clusters, 3 APs, 4+4 services
  const Scenario sc = build_scenario(cfg, 7);
  CHECK(sc.config.m == 4);
  CHECK(sc.ap_positions.size() == 12);
  CHECK(sc.user_positions.size() == 16);
  CHECK(sc.target_states.size() == 16);
  CHECK(sc.config.o == doctest::Approx(1024.0));
  CHECK(sc.config.o_bar_m == doctest::Approx(716.8));
  CHECK(sc.config.t_sym == doctest::Approx(6.4e-6));

  for (const auto& p : sc.ap_positions) {
    CHECK(p.x() >= 0.0);
    CHECK(p.x() <= 600.0);
    CHECK(p.y() >= 0.0);
    CHECK(p.y() <= 600.0);
  }
  // Nodes stay inside their own cell (300 m tiles on a 2x2 grid).
  for (int m = 0; m < 4; ++m) {
    const double x0 = (m % 2) * 300.0;
    const double y0 = (m / 2) * 300.0;
    for (int j = 0; j < 4; ++j) {
      const auto& u = sc.user_positions[m * 4 + j];
      CHECK(u.x() >= x0);
      CHECK(u.x() <= x0 + 300.0);
      CHECK(u.y() >= y0);
      CHECK(u.y() <= y0 + 300.0);
    }
  }
  // Initial speeds respect the configured interval.
  for (const auto& t : sc.target_states) {
    const double speed = std::hypot(t[2], t[3]);
    CHECK(speed >= cfg.v_range_min - 1e-9);
    CHECK(speed <= cfg.v_range_max + 1e-9);
  }
}

TEST_CASE("equal config and seed reproduce bitwise-identical scenarios") {
  ScenarioConfig cfg;
  const Scenario a = build_scenario(cfg, 1234);
  const Scenario b = build_scenario(cfg, 1234);
  CHECK(a.serialize() == b.serialize());
  const Scenario c = build_scenario(cfg, 1235);
  CHECK(a.serialize() != c.serialize());
}

TEST_CASE("invalid configurations are rejected with the violated invariant") {
  ScenarioConfig cfg;
  cfg.m_max = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("m_max") != std::string::npos);
  }

  ScenarioConfig slots;
  slots.d_ce = 30;  // 30*4 >= 100
  CHECK_THROWS_AS(slots.validate(), ConfigError);

  ScenarioConfig grouping;
  grouping.r = 2;
  grouping.m_max = 1;  // cannot cover 4 cells
  CHECK_THROWS_AS(grouping.validate(), ConfigError);

  ScenarioConfig rho;
  rho.rho_ak = 1.5;
  CHECK_THROWS_AS(rho.validate(), ConfigError);
}

TEST_CASE("perturbation stays within one percent of the area and inside it") {
  ScenarioConfig cfg;
  const Scenario base = build_scenario(cfg, 9);
  RandomStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario moved = perturb_positions(base, rng);
    for (std::size_t i = 0; i < base.ap_positions.size(); ++i) {
      const Eigen::Vector2d d = moved.ap_positions[i] - base.ap_positions[i];
      CHECK(std::abs(d.x()) <= 6.0 + 1e-12);
      CHECK(std::abs(d.y()) <= 6.0 + 1e-12);
      CHECK(moved.ap_positions[i].x() >= 0.0);
      CHECK(moved.ap_positions[i].x() <= 600.0);
    }
    for (std::size_t i = 0; i < base.target_states.size(); ++i) {
      // Velocities untouched.
      CHECK(moved.target_states[i][2] == base.target_states[i][2]);
      CHECK(moved.target_states[i][3] == base.target_states[i][3]);
      CHECK(moved.target_states[i][0] >= 0.0);
      CHECK(moved.target_states[i][0] <= 600.0);
    }
  }
}

TEST_CASE("zero offsets leave the scenario identical") {
  ScenarioConfig cfg;
  const Scenario base = build_scenario(cfg, 21);
  const Scenario same = perturb_positions_with(base, [] { return 0.0; });
  CHECK(base.serialize() == same.serialize());
}

TEST_CASE("config files accept every documented key and reject unknown ones") {
  const std::string text = R"(
# deployment
m = 2
r = 2
a = 2
k = 2
q = 2
n_tx = 2
b = 8
l = 50
n_t = 10
m_max = 2
delta_f = 156.25e3
f_c = 5.89e9
t_sym = 6.4e-6
t_bar = 3.2e-4
p_max = 10
p_ce = 0.316
d_ce = 1
rho_ak = 0.95
kappa_bar = 4
delta_q = 10
sigma_rcs = 1
g_r = 2.5
n0 = 4e-21
area = 300
v_range = 20, 80
o = 512
o_bar_m = 358.4
u_k_c_min = 0.05
u_k_c_max = 0.35
u_q_rp_min = 5e-5
u_q_rp_max = 2
u_q_rv_min = 5e-5
u_q_rv_max = 2
delta_theta = 8
j0_sigma_p = 10
j0_sigma_v = 5
gamma = 0.9
gae_lambda = 0.96
clip_start = 0.3
clip_end = 0.15
entropy_start = 1e-3
entropy_end = 1e-4
value_loss_weight = 0.5
learning_rate = 5e-5
ppo_epochs = 4
actor_hidden = 32,32
critic_hidden = 64,64
rng_seed = 99
)";
  const ScenarioConfig cfg = ScenarioConfig::from_string(text);
  CHECK(cfg.m == 2);
  CHECK(cfg.b == 8);
  CHECK(cfg.v_range_min == doctest::Approx(20.0));
  CHECK(cfg.v_range_max == doctest::Approx(80.0));
  CHECK(cfg.g_r == doctest::Approx(2.5));
  CHECK(cfg.actor_hidden == std::vector<int>{32, 32});
  CHECK(cfg.critic_hidden == std::vector<int>{64, 64});
  CHECK(cfg.rng_seed == 99);
  CHECK(cfg.o == doctest::Approx(512.0));

  CHECK_THROWS_AS(ScenarioConfig::from_string("m = 2\nbogus_key = 3\n"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_string("m 2\n"), ConfigError);
}

TEST_CASE("derived defaults fill in when keys are omitted") {
  const ScenarioConfig cfg = ScenarioConfig::from_string("m = 2\nr = 1\nm_max = 2\n");
  CHECK(cfg.t_sym == doctest::Approx(1.0 / cfg.delta_f));
  CHECK(cfg.t_bar == doctest::Approx(cfg.l * cfg.t_sym));
  CHECK(cfg.o == doctest::Approx(8.0 * 2 * 2 * 4 * 4));
  CHECK(cfg.o_bar_m == doctest::Approx(0.7 * cfg.o));
}
