#include "entisac/environment.hpp"

#include <algorithm>
#include <cmath>

#include "entisac/comm_metrics.hpp"
#include "entisac/errors.hpp"
#include "entisac/kinematics.hpp"

namespace entisac {

namespace {

double signed_log10(double x) {
  return (x < 0.0 ? -1.0 : 1.0) * std::log10(1.0 + std::abs(x));
}

}  // namespace

const char* role_name(Role role) {
  switch (role) {
    case Role::Lcp: return "LCP";
    case Role::Lpb: return "LPB";
    case Role::Fg: return "FG";
    case Role::Fpb: return "FPB";
  }
  return "?";
}

int lcp_obs_dim(const ScenarioConfig& c) {
  return 2 * c.k + 2 * c.a + c.a * c.k * 2 * c.n_tx + c.a * c.k + 4 * c.q + 16 * c.q;
}

int lpb_obs_dim(const ScenarioConfig& c) { return lcp_action_dim(c) + lcp_obs_dim(c); }

int report_slot_dim(const ScenarioConfig& c) {
  return c.k * (1 + 2 * c.a * c.n_tx + c.a) + c.q * 21 + c.a;
}

int fg_obs_dim(const ScenarioConfig& c) { return c.m * report_slot_dim(c); }

int fpb_obs_dim(const ScenarioConfig& c) {
  return c.m * (1 + report_slot_dim(c)) + c.m;
}

int lcp_action_dim(const ScenarioConfig& c) { return c.k + c.q + c.a + 1; }

int lpb_action_dim(const ScenarioConfig& c) { return c.a * 2 * (c.k + c.q); }

int fg_action_dim(const ScenarioConfig& c) { return c.m; }

int fpb_action_dim(const ScenarioConfig& c) {
  return c.num_aps() * 2 * c.m * (c.k + c.q);
}

Environment::Environment(Scenario scenario, std::uint64_t seed) {
  reset(scenario, seed);
}

void Environment::reset(std::uint64_t seed) { reset(scenario_, seed); }

void Environment::reset(const Scenario& scenario, std::uint64_t seed) {
  scenario_ = scenario;
  seed_ = seed;
  const ScenarioConfig& cfg = scenario_.config;

  channel_rng_ = RandomStream::child(seed, "channel");
  est_rng_ = RandomStream::child(seed, "estimation");
  motion_rng_ = RandomStream::child(seed, "motion");
  posterior_rng_ = RandomStream::child(seed, "posterior");

  transition_ = mobility_transition(cfg.t_bar);
  process_cov_ = process_noise_cov(cfg.delta_q, cfg.t_bar);

  book_.num_aps = cfg.num_aps();
  book_.num_users = cfg.num_users();
  book_.num_subbands = cfg.m;
  book_.n_tx = cfg.n_tx;
  book_.frame = 1;
  const int triples = book_.num_aps * book_.num_users * book_.num_subbands;
  book_.h.assign(triples, Eigen::VectorXcd());
  book_.h_hat.assign(triples, Eigen::VectorXcd());
  book_.has_estimate.assign(triples, 0);
  book_.delta.assign(triples, 0.0);
  book_.lambda.resize(book_.num_aps, book_.num_users);

  for (int a = 0; a < book_.num_aps; ++a) {
    for (int k = 0; k < book_.num_users; ++k) {
      book_.lambda(a, k) = large_scale_gain(scenario_.user_positions[k],
                                            scenario_.ap_positions[a], cfg.f_c);
      const double theta = relative_angle(scenario_.user_positions[k],
                                          scenario_.ap_positions[a]);
      for (int i = 0; i < book_.num_subbands; ++i) {
        book_.h[book_.index(a, k, i)] =
            init_channel(book_.lambda(a, k), cfg.kappa_bar, theta, cfg.n_tx, channel_rng_);
      }
    }
  }

  targets_.clear();
  beliefs_.clear();
  for (int q = 0; q < cfg.num_targets(); ++q) {
    targets_.push_back(TargetState::from_vector(scenario_.target_states[q], 0));
    SensingBelief b;
    b.j_prev = Eigen::Vector4d(1.0 / (cfg.j0_sigma_p * cfg.j0_sigma_p),
                               1.0 / (cfg.j0_sigma_p * cfg.j0_sigma_p),
                               1.0 / (cfg.j0_sigma_v * cfg.j0_sigma_v),
                               1.0 / (cfg.j0_sigma_v * cfg.j0_sigma_v))
                   .asDiagonal();
    b.x_est = targets_[q].as_vector();
    b.x_est[0] += posterior_rng_.normal(0.0, cfg.j0_sigma_p);
    b.x_est[1] += posterior_rng_.normal(0.0, cfg.j0_sigma_p);
    b.x_est[2] += posterior_rng_.normal(0.0, cfg.j0_sigma_v);
    b.x_est[3] += posterior_rng_.normal(0.0, cfg.j0_sigma_v);
    beliefs_.push_back(b);
  }

  frame_ = 1;
  done_ = false;
  start_frame();
}

void Environment::start_frame() {
  book_.frame = frame_;
  book_.clear_estimates();
  run_phase1_estimation();
  for (std::size_t q = 0; q < beliefs_.size(); ++q) {
    beliefs_[q].x_pred = predict_state(beliefs_[q], transition_);
  }
  lcp_decisions_.clear();
  lcp_raw_.clear();
  local_plans_.clear();
  federated_plans_.clear();
  partition_ = ServicePartition{};
  split_ = ResourceSplit{};
  grouping_ = Grouping{};
  stage_ = Stage::AwaitLcp;
}

void Environment::run_phase1_estimation() {
  const ScenarioConfig& cfg = scenario_.config;
  const double rho_eff = frame_ == 1 ? 0.0 : cfg.rho_ak;  // no prior on frame 1
  for (int m = 0; m < cfg.m; ++m) {
    for (int a = m * cfg.a; a < (m + 1) * cfg.a; ++a) {
      for (int k = m * cfg.k; k < (m + 1) * cfg.k; ++k) {
        const int idx = book_.index(a, k, m);
        const double pilots = static_cast<double>(cfg.b) * cfg.d_ce;
        const double delta = estimation_error_variance(book_.lambda(a, k), rho_eff,
                                                       cfg.p_ce, pilots,
                                                       scenario_.ap_noise[a]);
        book_.delta[idx] = delta;
        book_.h_hat[idx] = estimate_channel(book_.h[idx], delta, est_rng_);
        book_.has_estimate[idx] = 1;
      }
    }
  }
}

void Environment::run_federated_estimation() {
  const ScenarioConfig& cfg = scenario_.config;
  const double rho_eff = frame_ == 1 ? 0.0 : cfg.rho_ak;
  RandomStream fed_rng = RandomStream::child(seed_, "federated_estimation",
                                             static_cast<std::uint64_t>(frame_));
  for (int r = 0; r < cfg.r; ++r) {
    const RegimeContext ctx = make_federated_context(r, partition_, grouping_, cfg);
    for (int i : ctx.subbands) {
      for (int k : ctx.comm_users) {
        for (int a : ctx.aps) {
          const int idx = book_.index(a, k, i);
          if (book_.has_estimate[idx]) continue;  // own-cell pair from Phase I
          const int user_cell = k / cfg.k;
          const double pilots =
              static_cast<double>(user_cell == i ? cfg.b : split_.b_fed[i]) * cfg.d_ce;
          const double delta = estimation_error_variance(book_.lambda(a, k), rho_eff,
                                                         cfg.p_ce, pilots,
                                                         scenario_.ap_noise[a]);
          book_.delta[idx] = delta;
          book_.h_hat[idx] = estimate_channel(book_.h[idx], delta, fed_rng);
          book_.has_estimate[idx] = 1;
        }
      }
    }
  }
}

void Environment::require_stage_at_least(Stage s, const char* what) const {
  if (done_) throw CausalityError(std::string(what) + ": episode already finished");
  if (static_cast<int>(stage_) < static_cast<int>(s)) {
    throw CausalityError(std::string(what) + ": requested before its protocol stage");
  }
}

Eigen::VectorXd Environment::build_lcp_obs(int cell) const {
  const ScenarioConfig& cfg = scenario_.config;
  const double inv_area = 1.0 / cfg.area;
  const double inv_v = 1.0 / std::max(cfg.v_range_max, 1e-9);
  Eigen::VectorXd obs(lcp_obs_dim(cfg));
  int at = 0;
  for (int k = cell * cfg.k; k < (cell + 1) * cfg.k; ++k) {
    obs[at++] = scenario_.user_positions[k].x() * inv_area;
    obs[at++] = scenario_.user_positions[k].y() * inv_area;
  }
  for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
    obs[at++] = scenario_.ap_positions[a].x() * inv_area;
    obs[at++] = scenario_.ap_positions[a].y() * inv_area;
  }
  for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
    for (int k = cell * cfg.k; k < (cell + 1) * cfg.k; ++k) {
      const double scale = 1.0 / std::sqrt(book_.lambda(a, k));
      const Eigen::VectorXcd& h = book_.estimate(a, k, cell);
      for (int t = 0; t < cfg.n_tx; ++t) {
        obs[at++] = h[t].real() * scale;
        obs[at++] = h[t].imag() * scale;
      }
    }
  }
  for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
    for (int k = cell * cfg.k; k < (cell + 1) * cfg.k; ++k) {
      obs[at++] = book_.error_variance(a, k, cell) / book_.lambda(a, k);
    }
  }
  for (int q = cell * cfg.q; q < (cell + 1) * cfg.q; ++q) {
    const Eigen::Vector4d& p = beliefs_[q].x_pred;
    obs[at++] = p[0] * inv_area;
    obs[at++] = p[1] * inv_area;
    obs[at++] = p[2] * inv_v;
    obs[at++] = p[3] * inv_v;
  }
  for (int q = cell * cfg.q; q < (cell + 1) * cfg.q; ++q) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) obs[at++] = signed_log10(beliefs_[q].j_prev(i, j));
    }
  }
  return obs;
}

Eigen::VectorXd Environment::encode_lcp_action(int cell) const {
  const ScenarioConfig& cfg = scenario_.config;
  const LcpDecision& d = lcp_decisions_[cell];
  Eigen::VectorXd enc(lcp_action_dim(cfg));
  int at = 0;
  for (int k = cell * cfg.k; k < (cell + 1) * cfg.k; ++k) {
    enc[at++] = partition_.user_federated(cell, k) ? 1.0 : 0.0;
  }
  for (int q = cell * cfg.q; q < (cell + 1) * cfg.q; ++q) {
    enc[at++] = partition_.target_federated(cell, q) ? 1.0 : 0.0;
  }
  for (int j = 0; j < cfg.a; ++j) enc[at++] = d.p_local[j] / cfg.p_max;
  enc[at++] = static_cast<double>(d.b_local) / cfg.b;
  return enc;
}

Eigen::VectorXd Environment::build_report_slot(int cell) const {
  const ScenarioConfig& cfg = scenario_.config;
  const double inv_area = 1.0 / cfg.area;
  const double inv_v = 1.0 / std::max(cfg.v_range_max, 1e-9);
  Eigen::VectorXd slot = Eigen::VectorXd::Zero(report_slot_dim(cfg));
  int at = 0;
  for (int k = cell * cfg.k; k < (cell + 1) * cfg.k; ++k) {
    const bool fed = partition_.user_federated(cell, k);
    slot[at++] = fed ? 1.0 : 0.0;
    if (fed) {
      for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
        const double scale = 1.0 / std::sqrt(book_.lambda(a, k));
        const Eigen::VectorXcd& h = book_.estimate(a, k, cell);
        for (int t = 0; t < cfg.n_tx; ++t) {
          slot[at++] = h[t].real() * scale;
          slot[at++] = h[t].imag() * scale;
        }
      }
      for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
        slot[at++] = book_.error_variance(a, k, cell) / book_.lambda(a, k);
      }
    } else {
      at += 2 * cfg.a * cfg.n_tx + cfg.a;
    }
  }
  for (int q = cell * cfg.q; q < (cell + 1) * cfg.q; ++q) {
    const bool fed = partition_.target_federated(cell, q);
    slot[at++] = fed ? 1.0 : 0.0;
    if (fed) {
      const Eigen::Vector4d& p = beliefs_[q].x_pred;
      slot[at++] = p[0] * inv_area;
      slot[at++] = p[1] * inv_area;
      slot[at++] = p[2] * inv_v;
      slot[at++] = p[3] * inv_v;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) slot[at++] = signed_log10(beliefs_[q].j_prev(i, j));
      }
    } else {
      at += 20;
    }
  }
  for (int a = cell * cfg.a; a < (cell + 1) * cfg.a; ++a) {
    slot[at++] = split_.p_fed[a] / cfg.p_max;
  }
  return slot;
}

Eigen::VectorXd Environment::observe(const AgentId& agent) const {
  const ScenarioConfig& cfg = scenario_.config;
  switch (agent.role) {
    case Role::Lcp: {
      require_stage_at_least(Stage::AwaitLcp, "LCP observation");
      return build_lcp_obs(agent.index);
    }
    case Role::Lpb: {
      require_stage_at_least(Stage::AwaitLpb, "LPB observation");
      Eigen::VectorXd obs(lpb_obs_dim(cfg));
      obs << encode_lcp_action(agent.index), build_lcp_obs(agent.index);
      return obs;
    }
    case Role::Fg: {
      require_stage_at_least(Stage::AwaitFg, "FG observation");
      Eigen::VectorXd obs(fg_obs_dim(cfg));
      int at = 0;
      for (int m = 0; m < cfg.m; ++m) {
        obs.segment(at, report_slot_dim(cfg)) = build_report_slot(m);
        at += report_slot_dim(cfg);
      }
      return obs;
    }
    case Role::Fpb: {
      require_stage_at_least(Stage::AwaitFpb, "FPB observation");
      const int slot = report_slot_dim(cfg);
      Eigen::VectorXd obs = Eigen::VectorXd::Zero(fpb_obs_dim(cfg));
      const auto& cells = grouping_.clusters[agent.index];
      int at = 0;
      for (int m = 0; m < cfg.m; ++m) {
        const bool member = std::find(cells.begin(), cells.end(), m) != cells.end();
        obs[at++] = member ? 1.0 : 0.0;
        if (member) obs.segment(at, slot) = build_report_slot(m);
        at += slot;
      }
      for (int m = 0; m < cfg.m; ++m) {
        obs[at++] = static_cast<double>(grouping_.cluster_of(m) + 1) / cfg.r;
      }
      return obs;
    }
  }
  throw std::logic_error("observe: unknown role");
}

void Environment::submit_lcp(const std::vector<Eigen::VectorXd>& raw) {
  const ScenarioConfig& cfg = scenario_.config;
  if (done_) throw CausalityError("submit_lcp: episode already finished");
  if (stage_ != Stage::AwaitLcp) throw CausalityError("submit_lcp: out of protocol order");
  if (static_cast<int>(raw.size()) != cfg.m) {
    throw InterfaceError("submit_lcp: expected one action per cell");
  }
  lcp_decisions_.clear();
  for (int m = 0; m < cfg.m; ++m) {
    lcp_decisions_.push_back(decode_lcp(raw[m], m, cfg));
  }
  lcp_raw_ = raw;
  partition_ = assemble_partition(lcp_decisions_, cfg);
  split_ = assemble_split(lcp_decisions_, cfg);
  stage_ = Stage::AwaitLpb;
}

void Environment::submit_lpb(const std::vector<Eigen::VectorXd>& raw) {
  const ScenarioConfig& cfg = scenario_.config;
  if (done_) throw CausalityError("submit_lpb: episode already finished");
  if (stage_ != Stage::AwaitLpb) throw CausalityError("submit_lpb: out of protocol order");
  if (static_cast<int>(raw.size()) != cfg.m) {
    throw InterfaceError("submit_lpb: expected one action per cell");
  }
  local_plans_.clear();
  for (int m = 0; m < cfg.m; ++m) {
    const RegimeContext ctx = make_local_context(m, partition_, cfg);
    local_plans_.push_back(decode_beam_power(raw[m], Regime::Local, ctx, split_, book_, cfg));
  }
  stage_ = Stage::AwaitFg;
}

void Environment::submit_fg(const Eigen::VectorXd& raw) {
  const ScenarioConfig& cfg = scenario_.config;
  if (done_) throw CausalityError("submit_fg: episode already finished");
  if (stage_ != Stage::AwaitFg) throw CausalityError("submit_fg: out of protocol order");
  if (raw.size() != cfg.m) throw InterfaceError("submit_fg: expected one label per cell");
  std::vector<int> labels(cfg.m);
  for (int m = 0; m < cfg.m; ++m) {
    labels[m] = static_cast<int>(std::llround(std::clamp(raw[m], 0.0, cfg.r - 1.0)));
  }
  grouping_ = decode_fg(labels, cfg.r, cfg.m_max);
  run_federated_estimation();
  stage_ = Stage::AwaitFpb;
}

void Environment::submit_fpb(const std::vector<Eigen::VectorXd>& raw) {
  const ScenarioConfig& cfg = scenario_.config;
  if (done_) throw CausalityError("submit_fpb: episode already finished");
  if (stage_ != Stage::AwaitFpb) throw CausalityError("submit_fpb: out of protocol order");
  if (static_cast<int>(raw.size()) != cfg.r) {
    throw InterfaceError("submit_fpb: expected one action per cluster");
  }
  federated_plans_.clear();
  for (int r = 0; r < cfg.r; ++r) {
    const RegimeContext ctx = make_federated_context(r, partition_, grouping_, cfg);
    federated_plans_.push_back(
        decode_beam_power(raw[r], Regime::Federated, ctx, split_, book_, cfg));
  }
  stage_ = Stage::AwaitSettle;
}

StepResult Environment::finish_frame() {
  const ScenarioConfig& cfg = scenario_.config;
  if (done_) throw CausalityError("finish_frame: episode already finished");
  if (stage_ != Stage::AwaitSettle) {
    throw CausalityError("finish_frame: all agent actions must be submitted first");
  }

  FrameDiagnostics diag;
  diag.frame = frame_;
  diag.user_rate = Eigen::VectorXd::Zero(cfg.num_users());
  diag.user_utility = Eigen::VectorXd::Zero(cfg.num_users());
  diag.target_pos_err = Eigen::VectorXd::Zero(cfg.num_targets());
  diag.target_vel_err = Eigen::VectorXd::Zero(cfg.num_targets());
  diag.target_utility = Eigen::VectorXd::Zero(cfg.num_targets());
  diag.user_federated.assign(cfg.num_users(), 0);
  diag.target_federated.assign(cfg.num_targets(), 0);
  diag.slots_local.assign(cfg.m, 0);
  diag.slots_fed.assign(cfg.r, 0);

  std::vector<Eigen::Matrix4d> f_meas(cfg.num_targets(), Eigen::Matrix4d::Zero());

  // Localized regime.
  for (int m = 0; m < cfg.m; ++m) {
    diag.slots_local[m] = effective_slots_local(cfg.l, cfg.k, cfg.d_ce);
    const RegimeContext ctx = make_local_context(m, partition_, cfg);
    const std::vector<int> b_vec = {split_.b_local[m]};
    const std::vector<int> l_vec = {diag.slots_local[m]};
    for (int k : ctx.comm_users) {
      const double sinr = comm_sinr(k, m, ctx, local_plans_[m], book_, scenario_.user_noise[k]);
      diag.user_rate[k] = effective_rate({sinr}, b_vec, l_vec, cfg.m, cfg.b, cfg.l);
      diag.user_utility[k] = normalize_comm(diag.user_rate[k], cfg.u_k_c_min, cfg.u_k_c_max);
    }
    for (int q : ctx.targets) {
      f_meas[q] = fim_total(q, targets_[q], ctx, local_plans_[m], scenario_, b_vec, l_vec);
    }
  }

  // Federated regime.
  for (int r = 0; r < cfg.r; ++r) {
    const RegimeContext ctx = make_federated_context(r, partition_, grouping_, cfg);
    int max_unestimated = 0;
    for (int m : grouping_.clusters[r]) {
      const int unest = static_cast<int>(ctx.comm_users.size()) -
                        static_cast<int>(partition_.fed_users[m].size());
      max_unestimated = std::max(max_unestimated, unest);
    }
    diag.slots_fed[r] = effective_slots_federated(cfg.l, cfg.k, cfg.d_ce, max_unestimated);
    std::vector<int> b_vec, l_vec;
    for (int i : ctx.subbands) {
      b_vec.push_back(split_.b_fed[i]);
      l_vec.push_back(diag.slots_fed[r]);
    }
    for (int k : ctx.comm_users) {
      diag.user_federated[k] = 1;
      std::vector<double> sinrs;
      for (int i : ctx.subbands) {
        sinrs.push_back(comm_sinr(k, i, ctx, federated_plans_[r], book_, scenario_.user_noise[k]));
      }
      diag.user_rate[k] = effective_rate(sinrs, b_vec, l_vec, cfg.m, cfg.b, cfg.l);
      diag.user_utility[k] = normalize_comm(diag.user_rate[k], cfg.u_k_c_min, cfg.u_k_c_max);
    }
    for (int q : ctx.targets) {
      diag.target_federated[q] = 1;
      f_meas[q] = fim_total(q, targets_[q], ctx, federated_plans_[r], scenario_, b_vec, l_vec);
    }
  }

  // Belief updates, sensing errors, and posterior draws.
  for (int q = 0; q < cfg.num_targets(); ++q) {
    const Eigen::Matrix4d j_new = bfim_update(beliefs_[q], f_meas[q], process_cov_, transition_);
    const auto [pos_err, vel_err] = sensing_errors(j_new);
    diag.target_pos_err[q] = pos_err;
    diag.target_vel_err[q] = vel_err;
    diag.target_utility[q] = normalize_sense(pos_err, vel_err, cfg.u_q_rp_min,
                                             cfg.u_q_rp_max, cfg.u_q_rv_min, cfg.u_q_rv_max);
    const Eigen::Matrix4d cov = j_new.llt().solve(Eigen::Matrix4d::Identity());
    Eigen::Vector4d x_hat = targets_[q].as_vector();
    for (int i = 0; i < 4; ++i) {
      x_hat[i] += posterior_rng_.normal(0.0, std::sqrt(std::max(cov(i, i), 0.0)));
    }
    beliefs_[q].j_prev = j_new;
    beliefs_[q].x_est = x_hat;
  }

  // Accounting.
  std::vector<OverheadPair> per_cell;
  for (int m = 0; m < cfg.m; ++m) per_cell.push_back(phase1_overhead(m, partition_, cfg));
  std::vector<long> per_cluster;
  for (int r = 0; r < cfg.r; ++r) {
    per_cluster.push_back(federated_overhead(r, grouping_, partition_, cfg));
  }
  std::vector<double> comm_utils(diag.user_utility.data(),
                                 diag.user_utility.data() + diag.user_utility.size());
  std::vector<double> sense_utils(diag.target_utility.data(),
                                  diag.target_utility.data() + diag.target_utility.size());
  const FrameLedger ledger =
      frame_totals(comm_utils, sense_utils, per_cell, per_cluster, cfg.o, cfg.o_bar_m);
  diag.o1 = ledger.o1;
  diag.o2 = ledger.o2;
  diag.o_fed = ledger.o_fed;
  diag.utility = ledger.utility;
  diag.utility_comm = ledger.utility_comm;
  diag.utility_sense = ledger.utility_sense;
  diag.overhead = ledger.overhead;
  diag.usr = ledger.usr;
  diag.reward = ledger.reward;

  StepResult result;
  result.reward = ledger.reward;
  result.diag = diag;
  result.done = frame_ == cfg.n_t;

  if (result.done) {
    done_ = true;
    stage_ = Stage::Finished;
    return result;
  }

  // Advance physics into the next frame.
  for (int q = 0; q < cfg.num_targets(); ++q) {
    targets_[q] = advance_target(targets_[q], cfg.delta_q, cfg.t_bar, motion_rng_);
  }
  for (int a = 0; a < book_.num_aps; ++a) {
    for (int k = 0; k < book_.num_users; ++k) {
      for (int i = 0; i < book_.num_subbands; ++i) {
        const int idx = book_.index(a, k, i);
        book_.h[idx] = evolve_channel(book_.h[idx], cfg.rho_ak, book_.lambda(a, k), channel_rng_);
      }
    }
  }
  ++frame_;
  start_frame();
  for (int m = 0; m < cfg.m; ++m) {
    result.next_lcp_obs.push_back(build_lcp_obs(m));
  }
  return result;
}

StepResult Environment::step(const JointAction& actions) {
  submit_lcp(actions.lcp);
  submit_lpb(actions.lpb);
  submit_fg(actions.fg);
  submit_fpb(actions.fpb);
  return finish_frame();
}

const ServicePartition& Environment::partition() const {
  require_stage_at_least(Stage::AwaitLpb, "partition");
  return partition_;
}

const ResourceSplit& Environment::split() const {
  require_stage_at_least(Stage::AwaitLpb, "split");
  return split_;
}

const Grouping& Environment::grouping() const {
  require_stage_at_least(Stage::AwaitFpb, "grouping");
  return grouping_;
}

const std::vector<BeamPowerPlan>& Environment::local_plans() const {
  require_stage_at_least(Stage::AwaitFg, "local plans");
  return local_plans_;
}

const std::vector<BeamPowerPlan>& Environment::federated_plans() const {
  require_stage_at_least(Stage::AwaitSettle, "federated plans");
  return federated_plans_;
}

const Eigen::Vector4d& Environment::predicted_state(int target) const {
  return beliefs_[target].x_pred;
}

const SensingBelief& Environment::belief(int target) const { return beliefs_[target]; }

const TargetState& Environment::true_target(int target) const { return targets_[target]; }

}  // namespace entisac
