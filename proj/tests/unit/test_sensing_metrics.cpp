#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entisac/errors.hpp"
#include "entisac/sensing_metrics.hpp"

using namespace entisac;

namespace {

// Brute-force triple sum over (subband, subcarrier, slot), no closed forms.
WaveformWeights brute_force_weights(const std::vector<double>& gains,
                                    const std::vector<int>& bs, const std::vector<int>& ls,
                                    const std::vector<double>& ratio, double lam,
                                    double delta_f, double t_sym) {
  WaveformWeights w;
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    for (int b = 0; b < bs[i]; ++b) {
      for (int l = 0; l < ls[i]; ++l) {
        const double g = lam * gains[i];
        w.w_tt += 8.0 * std::pow(pi * b * delta_f, 2) * g;
        w.w_ff += 8.0 * std::pow(pi * ratio[i] * l * t_sym, 2) * g;
        w.w_tf += 8.0 * pi * pi * b * l * t_sym * delta_f * g;
      }
    }
  }
  return w;
}

// Independent assembly: 2x4 Jacobian of (tau, f) against the state, then the
// quadratic form with the 2x2 weight matrix.
Eigen::Matrix4d chain_rule_fim(const WaveformWeights& w, const DelayDoppler& dd) {
  Eigen::Matrix<double, 2, 4> jac = Eigen::Matrix<double, 2, 4>::Zero();
  jac(0, 0) = dd.d_tau_dx[0];
  jac(0, 1) = dd.d_tau_dx[1];
  jac(1, 0) = dd.d_f_dx[0];
  jac(1, 1) = dd.d_f_dx[1];
  jac(1, 2) = dd.d_f_dv[0];
  jac(1, 3) = dd.d_f_dv[1];
  Eigen::Matrix2d weights;
  weights << w.w_tt, -w.w_tf, -w.w_tf, w.w_ff;
  return jac.transpose() * weights * jac;
}

Scenario tiny_scenario(int aps, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.m = 1;
  cfg.r = 1;
  cfg.m_max = 1;
  cfg.a = aps;
  cfg.k = 1;
  cfg.q = 1;
  cfg.n_tx = 4;
  cfg.area = 300.0;
  return build_scenario(cfg, seed);
}

}  // namespace

TEST_CASE("cascaded fading decreases with either distance") {
  const Eigen::Vector2d t(0, 0);
  const double near = cascaded_fading(t, {50, 0}, {0, 60}, 1.0, 4, 1.0, 5.89e9);
  const double far = cascaded_fading(t, {100, 0}, {0, 60}, 1.0, 4, 1.0, 5.89e9);
  CHECK(near > far);
  // Closed form at round numbers.
  const double c0 = 3e8;
  const double want = 16.0 * c0 * c0 /
                      (std::pow(4.0 * std::numbers::pi, 3) * 1e18 *
                       std::pow(100.0 * 100.0, 2) * std::pow(60.0 * 60.0, 2));
  CHECK(cascaded_fading(t, {100, 0}, {0, 60}, 1.0, 4, 1.0, 1e9) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(cascaded_fading(t, t, {1, 1}, 1.0, 4, 1.0, 1e9), GeometryError);
}

TEST_CASE("sense gain of an aligned unit beam equals its power") {
  RegimeContext ctx;
  ctx.aps = {0};
  ctx.targets = {0};
  ctx.subbands = {0};
  BeamPowerPlan plan = BeamPowerPlan::empty(Regime::Local, 0, {0}, 1, 0, 1);
  const double theta = 0.37;
  plan.radar_power(0, 0) = 2.5;
  plan.radar_beams[0] = steering(theta, 4);
  CHECK(sense_gain(0, 0, 0, ctx, plan, theta, 4) == doctest::Approx(2.5).epsilon(1e-12));

  plan.radar_power(0, 0) = 0.0;
  CHECK(sense_gain(0, 0, 0, ctx, plan, theta, 4) == 0.0);
}

TEST_CASE("sense gain matches independent term-by-term evaluation") {
  RandomStream rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const int users = 2, targets = 2;
    RegimeContext ctx;
    ctx.aps = {0};
    ctx.comm_users = {0, 1};
    ctx.targets = {0, 1};
    ctx.subbands = {0};
    BeamPowerPlan plan = BeamPowerPlan::empty(Regime::Local, 0, {0}, 1, users, targets);
    const double theta = rng.uniform(-1.5, 1.5);
    const Eigen::VectorXcd v = steering(theta, 4);
    double want = 0.0;
    for (int k = 0; k < users; ++k) {
      plan.comm_power(0, k) = rng.uniform(0.0, 1.0);
      Eigen::VectorXcd w = rng.cnormal_vector(4, 1.0);
      w /= w.norm();
      plan.comm_beams[0][k] = w;
      std::complex<double> acc{0, 0};
      for (int t = 0; t < 4; ++t) acc += std::conj(v[t]) * w[t];
      want += plan.comm_power(0, k) * std::norm(acc);
    }
    for (int q = 0; q < targets; ++q) {
      plan.radar_power(0, q) = rng.uniform(0.0, 1.0);
      Eigen::VectorXcd w = rng.cnormal_vector(4, 1.0);
      w /= w.norm();
      plan.radar_beams[q] = w;
      std::complex<double> acc{0, 0};
      for (int t = 0; t < 4; ++t) acc += std::conj(v[t]) * w[t];
      want += plan.radar_power(0, q) * std::norm(acc);
    }
    CHECK(sense_gain(0, 0, 0, ctx, plan, theta, 4) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("waveform weight closed forms match the brute-force triple sums") {
  const std::vector<double> gains = {0.8, 1.7};
  const std::vector<int> bs = {16, 12};
  const std::vector<int> ls = {96, 94};
  const std::vector<double> ratio = {1.0, 1.000424};
  const double lam = 3.2e-21;
  const double df = 156.25e3;
  const double ts = 6.4e-6;
  const WaveformWeights fast = waveform_weights(gains, bs, ls, ratio, lam, df, ts);
  const WaveformWeights slow = brute_force_weights(gains, bs, ls, ratio, lam, df, ts);
  CHECK(fast.w_tt == doctest::Approx(slow.w_tt).epsilon(1e-10));
  CHECK(fast.w_ff == doctest::Approx(slow.w_ff).epsilon(1e-10));
  CHECK(fast.w_tf == doctest::Approx(slow.w_tf).epsilon(1e-10));
}

TEST_CASE("degenerate grids have no delay or Doppler resolution") {
  const WaveformWeights one_carrier =
      waveform_weights({1.0}, {1}, {50}, {1.0}, 1.0, 1e5, 1e-5);
  CHECK(one_carrier.w_tt == 0.0);
  const WaveformWeights one_slot = waveform_weights({1.0}, {16}, {1}, {1.0}, 1.0, 1e5, 1e-5);
  CHECK(one_slot.w_ff == 0.0);
  CHECK(one_slot.w_tf == 0.0);
}

TEST_CASE("pair FIM blocks match the chain-rule construction") {
  RandomStream rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    TargetState s;
    s.x = {rng.uniform(50, 250), rng.uniform(50, 250)};
    s.v = {rng.uniform(-60, 60), rng.uniform(-60, 60)};
    const Eigen::Vector2d a(rng.uniform(0, 300), rng.uniform(0, 300));
    const Eigen::Vector2d b(rng.uniform(0, 300), rng.uniform(0, 300));
    if ((s.x - a).norm() < 5 || (s.x - b).norm() < 5) continue;
    const DelayDoppler dd = delay_doppler(s, a, b, 5.89e9);
    WaveformWeights w;
    w.w_tt = rng.uniform(0.0, 1e-2);
    w.w_ff = rng.uniform(0.0, 1e-2);
    w.w_tf = rng.uniform(0.0, 1e-3);
    const Eigen::Matrix4d got = fim_pair(w, dd).assemble();
    const Eigen::Matrix4d want = chain_rule_fim(w, dd);
    CHECK((got - want).norm() <= 1e-8 * std::max(want.norm(), 1e-30));
  }
}

TEST_CASE("pair FIM structure under vanishing weights") {
  TargetState s;
  s.x = {10, 20};
  s.v = {5, -3};
  const DelayDoppler dd = delay_doppler(s, {100, 0}, {0, 100}, 1e9);
  WaveformWeights zero;
  CHECK(fim_pair(zero, dd).assemble().norm() == 0.0);

  WaveformWeights tau_only;
  tau_only.w_tt = 1.0;
  const FimPair f = fim_pair(tau_only, dd);
  CHECK(f.f_pv.norm() == 0.0);
  CHECK(f.f_v.norm() == 0.0);
  CHECK(f.f_p.norm() > 0.0);
  // tau-only position block is the outer product of the delay gradient.
  const Eigen::Matrix2d want = dd.d_tau_dx * dd.d_tau_dx.transpose();
  CHECK((f.f_p - want).norm() < 1e-15);
}

TEST_CASE("total FIM: empty context, power linearity, positive semidefiniteness") {
  RandomStream rng(53);
  const Scenario sc = tiny_scenario(3, 4);
  TargetState st = TargetState::from_vector(sc.target_states[0]);

  RegimeContext empty;
  empty.subbands = {0};
  BeamPowerPlan none = BeamPowerPlan::empty(Regime::Local, 0, {0}, 3, 1, 1);
  CHECK(fim_total(0, st, empty, none, sc, {16}, {96}).norm() == 0.0);

  for (int trial = 0; trial < 100; ++trial) {
    RegimeContext ctx;
    ctx.aps = {0, 1, 2};
    ctx.comm_users = {0};
    ctx.targets = {0};
    ctx.subbands = {0};
    BeamPowerPlan plan = BeamPowerPlan::empty(Regime::Local, 0, {0}, 3, 1, 1);
    TargetState state;
    state.x = {rng.uniform(20, 280), rng.uniform(20, 280)};
    state.v = {rng.uniform(-60, 60), rng.uniform(-60, 60)};
    for (int a = 0; a < 3; ++a) {
      plan.comm_power(a, 0) = rng.uniform(0.0, 0.5);
      Eigen::VectorXcd w = rng.cnormal_vector(4, 1.0);
      plan.comm_beams[0][a * 1 + 0] = w / w.norm();
      plan.radar_power(a, 0) = rng.uniform(0.0, 0.5);
      Eigen::VectorXcd wr = rng.cnormal_vector(4, 1.0);
      plan.radar_beams[a * 1 + 0] = wr / wr.norm();
    }
    const Eigen::Matrix4d f = fim_total(0, state, ctx, plan, sc, {16}, {96});
    CHECK((f - f.transpose()).norm() <= 1e-12 * std::max(f.norm(), 1e-30));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(f);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * std::max(f.norm(), 1e-30));

    // Doubling every power doubles the information.
    BeamPowerPlan doubled = plan;
    doubled.comm_power *= 2.0;
    doubled.radar_power *= 2.0;
    const Eigen::Matrix4d f2 = fim_total(0, state, ctx, doubled, sc, {16}, {96});
    CHECK((f2 - 2.0 * f).norm() <= 1e-9 * std::max(f2.norm(), 1e-30));
  }
}

TEST_CASE("Bayesian information recursion") {
  SensingBelief belief;
  belief.j_prev = Eigen::Matrix4d::Identity();

  // No measurement: pure prediction loses information.
  const Eigen::Matrix4d e = 0.1 * Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d j_pred = bfim_update(belief, Eigen::Matrix4d::Zero(), e, g);
  CHECK((j_pred - (1.0 / 1.1) * Eigen::Matrix4d::Identity()).norm() < 1e-12);

  // Static-target limit: information adds along the measurement diagonal.
  const Eigen::Matrix4d f_meas = Eigen::Vector4d(4.0, 2.0, 1.0, 0.5).asDiagonal();
  const Eigen::Matrix4d tiny_e = 1e-12 * Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d j_add = bfim_update(belief, f_meas, tiny_e, g);
  const Eigen::Matrix4d want =
      Eigen::Matrix4d::Identity() + Eigen::Matrix4d(Eigen::Vector4d(4, 2, 1, 0.5).asDiagonal());
  CHECK((j_add - want).norm() < 1e-6);
}

TEST_CASE("recursion keeps the information matrix positive definite") {
  RandomStream rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Matrix4d a;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a(i, j) = rng.normal();
    }
    SensingBelief belief;
    belief.j_prev = a.transpose() * a + 0.1 * Eigen::Matrix4d::Identity();
    Eigen::Matrix4d b;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) b(i, j) = rng.normal();
    }
    const Eigen::Matrix4d f_meas = b.transpose() * b;  // PSD, possibly near-singular
    const Eigen::Matrix4d e =
        process_noise_cov(rng.uniform(0.1, 10.0), rng.uniform(0.01, 0.5)) +
        1e-9 * Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d g = mobility_transition(rng.uniform(0.01, 0.5));
    const Eigen::Matrix4d j = bfim_update(belief, f_meas, e, g);
    CHECK((j - j.transpose()).norm() <= 1e-10 * j.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(j);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
  SensingBelief bad;
  bad.j_prev = Eigen::Vector4d(1.0, 1.0, -1.0, 1.0).asDiagonal();
  CHECK_THROWS_AS(bfim_update(bad, Eigen::Matrix4d::Zero(),
                              0.1 * Eigen::Matrix4d::Identity(),
                              Eigen::Matrix4d::Identity()),
                  NumericError);
}

TEST_CASE("singular measurements contribute only informative directions") {
  SensingBelief belief;
  belief.j_prev = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
  f(0, 0) = 5.0;  // position-x information only
  const Eigen::Matrix4d j = bfim_update(belief, f, 1e-12 * Eigen::Matrix4d::Identity(),
                                        Eigen::Matrix4d::Identity());
  CHECK(j(0, 0) == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(j(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sensing errors from the inverse information") {
  const Eigen::Matrix4d iso = 4.0 * Eigen::Matrix4d::Identity();
  const auto [p1, v1] = sensing_errors(iso);
  CHECK(p1 == doctest::Approx(0.5));
  CHECK(v1 == doctest::Approx(0.5));

  const Eigen::Matrix4d diag = Eigen::Vector4d(4.0, 4.0, 1.0, 1.0).asDiagonal();
  const auto [p2, v2] = sensing_errors(diag);
  CHECK(p2 == doctest::Approx(0.5));
  CHECK(v2 == doctest::Approx(2.0));

  CHECK_THROWS_AS(sensing_errors(Eigen::Matrix4d::Zero()), NumericError);
}

TEST_CASE("more information never hurts: Loewner-ordered pairs") {
  RandomStream rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Matrix4d a, b;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        a(i, j) = rng.normal();
        b(i, j) = rng.normal();
      }
    }
    const Eigen::Matrix4d j1 = a.transpose() * a + 0.05 * Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d j2 = j1 + b.transpose() * b;  // j2 >= j1
    const auto [p1, v1] = sensing_errors(j1);
    const auto [p2, v2] = sensing_errors(j2);
    CHECK(p2 <= p1 + 1e-12);
    CHECK(v2 <= v1 + 1e-12);
  }
}

TEST_CASE("state prediction matches the noiseless motion step") {
  SensingBelief belief;
  belief.x_est << 0.0, 0.0, 10.0, 0.0;
  const Eigen::Matrix4d g = mobility_transition(0.1);
  const Eigen::Vector4d pred = predict_state(belief, g);
  CHECK(pred[0] == doctest::Approx(1.0));
  CHECK(pred[2] == doctest::Approx(10.0));

  RandomStream rng(56);
  TargetState s = TargetState::from_vector(belief.x_est);
  const TargetState moved = advance_target(s, 0.0, 0.1, rng);
  CHECK((pred - moved.as_vector()).norm() < 1e-12);

  SensingBelief still;
  still.x_est << 7.0, -2.0, 0.0, 0.0;
  CHECK((predict_state(still, g).head<2>() - still.x_est.head<2>()).norm() == 0.0);
}
