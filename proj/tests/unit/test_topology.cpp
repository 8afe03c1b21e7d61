#include <doctest.h>

#include <cmath>

#include "entisac/channel.hpp"
#include "entisac/errors.hpp"
#include "entisac/kinematics.hpp"
#include "entisac/environment.hpp"
#include "entisac/topology.hpp"

using namespace entisac;

namespace {

ScenarioConfig small_cfg() {
  ScenarioConfig cfg;
  cfg.m = 2;
  cfg.r = 2;
  cfg.m_max = 2;
  cfg.a = 2;
  cfg.k = 2;
  cfg.q = 2;
  cfg.n_tx = 2;
  cfg.b = 16;
  cfg.area = 300.0;
  cfg.validate();
  return cfg;
}

ChannelBook full_book(const ScenarioConfig& cfg, RandomStream& rng) {
  ChannelBook book;
  book.num_aps = cfg.num_aps();
  book.num_users = cfg.num_users();
  book.num_subbands = cfg.m;
  book.n_tx = cfg.n_tx;
  const int triples = book.num_aps * book.num_users * book.num_subbands;
  book.h.resize(triples);
  book.h_hat.resize(triples);
  book.has_estimate.assign(triples, 1);
  book.delta.assign(triples, 0.01);
  book.lambda = Eigen::MatrixXd::Ones(book.num_aps, book.num_users);
  for (int t = 0; t < triples; ++t) {
    book.h[t] = rng.cnormal_vector(cfg.n_tx, 1.0);
    book.h_hat[t] = book.h[t];
  }
  return book;
}

Eigen::VectorXd random_lcp_raw(const ScenarioConfig& cfg, RandomStream& rng) {
  Eigen::VectorXd raw(cfg.k + cfg.q + cfg.a + 1);
  for (int i = 0; i < cfg.k + cfg.q; ++i) raw[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
  for (int i = 0; i < cfg.a; ++i) {
    raw[cfg.k + cfg.q + i] = rng.uniform(-0.5, cfg.p_max * 1.5);  // exercise clamping
  }
  raw[cfg.k + cfg.q + cfg.a] = rng.uniform(-1.0, cfg.b + 2.0);
  return raw;
}

}  // namespace

TEST_CASE("LCP decode corners") {
  const ScenarioConfig cfg = small_cfg();

  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(cfg.k + cfg.q + cfg.a + 1);
  const LcpDecision all_local = decode_lcp(zeros, 1, cfg);
  CHECK(all_local.local_users == std::vector<int>{2, 3});
  CHECK(all_local.fed_users.empty());
  CHECK(all_local.local_targets == std::vector<int>{2, 3});
  CHECK(all_local.b_local == 0);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(cfg.k + cfg.q + cfg.a + 1);
  const LcpDecision all_fed = decode_lcp(ones, 0, cfg);
  CHECK(all_fed.fed_users == std::vector<int>{0, 1});
  CHECK(all_fed.local_users.empty());
  CHECK(all_fed.fed_targets == std::vector<int>{0, 1});

  Eigen::VectorXd bw = zeros;
  bw[cfg.k + cfg.q + cfg.a] = 7.2;
  CHECK(decode_lcp(bw, 0, cfg).b_local == 8);  // ceiling map

  CHECK_THROWS_AS(decode_lcp(Eigen::VectorXd::Zero(3), 0, cfg), InterfaceError);
}

TEST_CASE("grouping decode and deterministic repair") {
  const Grouping balanced = decode_fg({0, 0, 1, 1}, 2, 2);
  CHECK(balanced.clusters[0] == std::vector<int>{0, 1});
  CHECK(balanced.clusters[1] == std::vector<int>{2, 3});

  // Everyone asks for cluster 0; overflow cells move highest-index-first.
  const Grouping repaired = decode_fg({0, 0, 0, 0}, 2, 2);
  CHECK(repaired.clusters[0] == std::vector<int>{0, 1});
  CHECK(repaired.clusters[1] == std::vector<int>{2, 3});
  const Grouping again = decode_fg({0, 0, 0, 0}, 2, 2);
  CHECK(again.clusters == repaired.clusters);

  // Unconstrained cap accepts any labeling verbatim.
  const Grouping loose = decode_fg({1, 1, 1, 1}, 2, 4);
  CHECK(loose.clusters[0].empty());
  CHECK(loose.clusters[1] == std::vector<int>{0, 1, 2, 3});

  CHECK(loose.cluster_of(2) == 1);
}

TEST_CASE("power projection: identity inside, exact rescale outside") {
  Eigen::VectorXd raw(2);
  raw << 0.1, 0.2;
  const Eigen::VectorXd same = project_power_simplex(raw, {16}, 10.0);
  CHECK((same - raw).norm() == 0.0);

  // Two subbands of 16 subcarriers each; powers apply on every subband.
  raw << 2.0, 2.0;
  const Eigen::VectorXd scaled = project_power_simplex(raw, {16, 16}, 32.0);
  CHECK(scaled[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scaled[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(32.0 * scaled.sum() == doctest::Approx(32.0).epsilon(1e-12));

  CHECK(project_power_simplex(raw, {16}, 0.0).norm() == 0.0);

  // Idempotence and scale invariance above the budget.
  const Eigen::VectorXd twice = project_power_simplex(scaled, {16, 16}, 32.0);
  CHECK((twice - scaled).norm() == 0.0);
  const Eigen::VectorXd big = project_power_simplex(3.0 * raw, {16, 16}, 32.0);
  CHECK((big - scaled).norm() < 1e-12);
}

TEST_CASE("beam/power decode: grid angles, indicators, phase alignment") {
  const ScenarioConfig cfg = small_cfg();
  CHECK(cfg.grid_angle(3) == doctest::Approx(0.0));  // level 4 of 8 is broadside

  RandomStream rng(61);
  ChannelBook book = full_book(cfg, rng);

  std::vector<LcpDecision> decisions;
  for (int m = 0; m < cfg.m; ++m) {
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cfg.k + cfg.q + cfg.a + 1);
    raw[0] = 1.0;  // first user of each cell federated
    raw.segment(cfg.k + cfg.q, cfg.a).setConstant(cfg.p_max / 2);
    raw[cfg.k + cfg.q + cfg.a] = 8.0;
    decisions.push_back(decode_lcp(raw, m, cfg));
  }
  const ServicePartition part = assemble_partition(decisions, cfg);
  const ResourceSplit split = assemble_split(decisions, cfg);

  const RegimeContext ctx = make_local_context(0, part, cfg);
  CHECK(ctx.comm_users == std::vector<int>{1});  // user 0 went federated
  CHECK(ctx.targets == std::vector<int>{0, 1});

  Eigen::VectorXd raw = Eigen::VectorXd::Zero(lpb_action_dim(cfg));
  for (int ai = 0; ai < cfg.a; ++ai) {
    const int base = ai * 2 * (cfg.k + cfg.q);
    for (int e = 0; e < cfg.k + cfg.q; ++e) {
      raw[base + e] = 0.3;
      raw[base + cfg.k + cfg.q + e] = 3.0;  // grid level index
    }
  }
  const BeamPowerPlan plan = decode_beam_power(raw, Regime::Local, ctx, split, book, cfg);

  // Non-served user forced to zero power regardless of the raw entry.
  CHECK(plan.comm_power(0, 0) == 0.0);
  CHECK(plan.comm_power(0, 1) > 0.0);
  CHECK(plan.radar_power(1, 0) > 0.0);

  // Coherent combining: the estimated channel response is real nonnegative.
  for (int a : ctx.aps) {
    const std::complex<double> resp = book.estimate(a, 1, 0).dot(plan.comm_beam(a, 1, 0));
    CHECK(resp.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(resp.real() >= 0.0);
  }
}

TEST_CASE("random actions always decode to feasible topologies") {
  const ScenarioConfig cfg = small_cfg();
  RandomStream rng(62);
  ChannelBook book = full_book(cfg, rng);

  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LcpDecision> decisions;
    for (int m = 0; m < cfg.m; ++m) decisions.push_back(decode_lcp(random_lcp_raw(cfg, rng), m, cfg));
    const ServicePartition part = assemble_partition(decisions, cfg);
    const ResourceSplit split = assemble_split(decisions, cfg);
    std::vector<int> labels;
    for (int m = 0; m < cfg.m; ++m) labels.push_back(rng.uniform_int(0, cfg.r - 1));
    const Grouping grouping = decode_fg(labels, cfg.r, cfg.m_max);

    std::vector<BeamPowerPlan> plans;
    for (int m = 0; m < cfg.m; ++m) {
      const RegimeContext ctx = make_local_context(m, part, cfg);
      Eigen::VectorXd raw(lpb_action_dim(cfg));
      for (int i = 0; i < raw.size(); ++i) raw[i] = rng.uniform(-1.0, cfg.p_max * 1.2);
      plans.push_back(decode_beam_power(raw, Regime::Local, ctx, split, book, cfg));
    }
    for (int r = 0; r < cfg.r; ++r) {
      const RegimeContext ctx = make_federated_context(r, part, grouping, cfg);
      Eigen::VectorXd raw(fpb_action_dim(cfg));
      for (int i = 0; i < raw.size(); ++i) raw[i] = rng.uniform(-1.0, cfg.p_max * 1.2);
      plans.push_back(decode_beam_power(raw, Regime::Federated, ctx, split, book, cfg));
    }
    const auto violations = validate_topology(part, split, grouping, plans, cfg);
    REQUIRE(violations.empty());
  }
}

TEST_CASE("validate_topology flags constructed violations") {
  const ScenarioConfig cfg = small_cfg();
  RandomStream rng(63);
  ChannelBook book = full_book(cfg, rng);

  std::vector<LcpDecision> decisions;
  for (int m = 0; m < cfg.m; ++m) {
    decisions.push_back(decode_lcp(Eigen::VectorXd::Zero(cfg.k + cfg.q + cfg.a + 1), m, cfg));
    decisions.back().b_local = cfg.b;
  }
  ServicePartition part = assemble_partition(decisions, cfg);
  ResourceSplit split = assemble_split(decisions, cfg);
  split.b_local = {cfg.b, cfg.b};
  split.b_fed = {0, 0};
  split.p_local.setConstant(cfg.p_max);
  split.p_fed.setConstant(0.0);
  Grouping grouping = decode_fg({0, 1}, cfg.r, cfg.m_max);

  const RegimeContext ctx = make_local_context(0, part, cfg);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(lpb_action_dim(cfg));
  raw[0] = cfg.p_max;  // user 0 from AP 0
  BeamPowerPlan plan = decode_beam_power(raw, Regime::Local, ctx, split, book, cfg);
  CHECK(validate_topology(part, split, grouping, {plan}, cfg).empty());

  // Push the per-AP total one percent over the line while every individual
  // entity stays under its own cap.
  BeamPowerPlan hot = plan;
  const double each = 1.01 * cfg.p_max / (2.0 * cfg.b);
  hot.comm_power(0, 0) = each;
  hot.comm_power(0, 1) = each;
  hot.comm_beams[0][0 * cfg.num_users() + 0] = steering(0.0, cfg.n_tx);
  hot.comm_beams[0][0 * cfg.num_users() + 1] = steering(0.0, cfg.n_tx);
  const auto violations = validate_topology(part, split, grouping, {hot}, cfg);
  REQUIRE(!violations.empty());
  CHECK(violations.front() == "per-AP local power");

  // Overlapping clusters.
  Grouping overlap;
  overlap.clusters = {{0, 1}, {1}};
  const auto v2 = validate_topology(part, split, grouping = overlap, {}, cfg);
  REQUIRE(!v2.empty());
  CHECK(v2.front() == "CFN disjointness");

  // Oversized cluster.
  Grouping big;
  big.clusters = {{0, 1}, {}};
  ScenarioConfig tight = cfg;
  tight.m_max = 1;
  tight.r = 2;
  const auto v3 = validate_topology(part, split, big, {}, tight);
  REQUIRE(!v3.empty());
  CHECK(v3.front() == "CFN size cap");
}

TEST_CASE("individual power caps are implied by the per-AP totals") {
  const ScenarioConfig cfg = small_cfg();
  RandomStream rng(64);
  ChannelBook book = full_book(cfg, rng);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LcpDecision> decisions;
    for (int m = 0; m < cfg.m; ++m) decisions.push_back(decode_lcp(random_lcp_raw(cfg, rng), m, cfg));
    const ServicePartition part = assemble_partition(decisions, cfg);
    const ResourceSplit split = assemble_split(decisions, cfg);
    const RegimeContext ctx = make_local_context(0, part, cfg);
    Eigen::VectorXd raw(lpb_action_dim(cfg));
    for (int i = 0; i < raw.size(); ++i) raw[i] = rng.uniform(0.0, cfg.p_max);
    const BeamPowerPlan plan = decode_beam_power(raw, Regime::Local, ctx, split, book, cfg);
    for (int a : ctx.aps) {
      for (int k : ctx.comm_users) {
        CHECK(split.b_local[0] * plan.comm_power(a, k) <= split.p_local[a] + 1e-9);
      }
      for (int q : ctx.targets) {
        CHECK(split.b_local[0] * plan.radar_power(a, q) <= split.p_local[a] + 1e-9);
      }
    }
  }
}
