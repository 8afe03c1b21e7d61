#include "entisac/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "entisac/errors.hpp"

namespace entisac {

GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      double gamma, double gae_lambda) {
  if (rewards.size() != values.size()) {
    throw std::invalid_argument("compute_gae: rewards/values length mismatch");
  }
  const int n = static_cast<int>(rewards.size());
  GaeResult out;
  out.deltas.resize(n);
  out.advantages.resize(n);
  out.returns.resize(n);
  for (int t = 0; t < n; ++t) {
    const double next_v = t + 1 < n ? values[t + 1] : 0.0;  // episode truly ends
    out.deltas[t] = rewards[t] + gamma * next_v - values[t];
  }
  double running = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    running = out.deltas[t] + gamma * gae_lambda * running;
    out.advantages[t] = running;
    out.returns[t] = running + values[t];
  }
  return out;
}

void standardize_advantages(std::vector<std::vector<double>>& per_agent) {
  double sum = 0.0;
  long count = 0;
  for (const auto& v : per_agent) {
    for (double x : v) {
      sum += x;
      ++count;
    }
  }
  if (count == 0) return;
  const double mean = sum / count;
  double sq = 0.0;
  for (const auto& v : per_agent) {
    for (double x : v) sq += (x - mean) * (x - mean);
  }
  const double stddev = std::max(std::sqrt(sq / count), 1e-8);
  for (auto& v : per_agent) {
    for (double& x : v) x = (x - mean) / stddev;
  }
}

double actor_loss_value(const std::vector<double>& logp_new, const std::vector<double>& logp_old,
                        const std::vector<double>& adv_norm, const std::vector<double>& entropy,
                        double clip_eps, double entropy_coef) {
  double total = 0.0;
  const int n = static_cast<int>(logp_new.size());
  for (int i = 0; i < n; ++i) {
    const double ratio = std::exp(logp_new[i] - logp_old[i]);
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    const double surrogate = std::min(ratio * adv_norm[i], clipped * adv_norm[i]);
    total += surrogate + entropy_coef * entropy[i];
  }
  return -total / n;
}

double smooth_l1(double x) {
  const double ax = std::abs(x);
  return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double smooth_l1_grad(double x) {
  if (x > 1.0) return 1.0;
  if (x < -1.0) return -1.0;
  return x;
}

double critic_loss_value(const std::vector<double>& values, const std::vector<double>& returns) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) total += smooth_l1(values[i] - returns[i]);
  return total / static_cast<double>(values.size());
}

MappoLearner::MappoLearner(const ScenarioConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  for (int m = 0; m < cfg_.m; ++m) agents_.push_back({Role::Lcp, m});
  for (int m = 0; m < cfg_.m; ++m) agents_.push_back({Role::Lpb, m});
  agents_.push_back({Role::Fg, 0});
  for (int r = 0; r < cfg_.r; ++r) agents_.push_back({Role::Fpb, r});

  RandomStream init = RandomStream::child(seed, "learner_init");
  actors_.reserve(agents_.size());
  for (const AgentId& id : agents_) {
    switch (id.role) {
      case Role::Lcp:
        actors_.emplace_back(lcp_action_space(cfg_), lcp_obs_dim(cfg_), cfg_.actor_hidden, init);
        break;
      case Role::Lpb:
        actors_.emplace_back(lpb_action_space(cfg_), lpb_obs_dim(cfg_), cfg_.actor_hidden, init);
        break;
      case Role::Fg:
        actors_.emplace_back(fg_action_space(cfg_), fg_obs_dim(cfg_), cfg_.actor_hidden, init);
        break;
      case Role::Fpb:
        actors_.emplace_back(fpb_action_space(cfg_), fpb_obs_dim(cfg_), cfg_.actor_hidden, init);
        break;
    }
  }

  auto critic_in = [this](Role role) {
    switch (role) {
      case Role::Lcp:
        return lcp_obs_dim(cfg_) + lcp_action_space(cfg_).encoded_dim() + cfg_.m;
      case Role::Lpb:
        return lpb_obs_dim(cfg_) + lpb_action_space(cfg_).encoded_dim() + cfg_.m;
      case Role::Fg:
        return fg_obs_dim(cfg_) + fg_action_space(cfg_).encoded_dim() + 1;
      case Role::Fpb:
        return fpb_obs_dim(cfg_) + fpb_action_space(cfg_).encoded_dim() + cfg_.r;
    }
    return 0;
  };
  for (Role role : {Role::Lcp, Role::Lpb, Role::Fg, Role::Fpb}) {
    critics_.emplace_back(critic_in(role), cfg_.critic_hidden, init);
  }

  for (const Actor& a : actors_) {
    actor_opts_.emplace_back(a.param_count(), cfg_.learning_rate);
  }
  for (const Critic& c : critics_) {
    critic_opts_.emplace_back(c.param_count(), cfg_.learning_rate);
  }
}

int MappoLearner::agent_index(const AgentId& id) const {
  for (int i = 0; i < agent_count(); ++i) {
    if (agents_[i].role == id.role && agents_[i].index == id.index) return i;
  }
  throw std::logic_error("agent_index: unknown agent");
}

int MappoLearner::role_cardinality(Role role) const {
  switch (role) {
    case Role::Lcp:
    case Role::Lpb:
      return cfg_.m;
    case Role::Fg:
      return 1;
    case Role::Fpb:
      return cfg_.r;
  }
  return 0;
}

Eigen::VectorXd MappoLearner::critic_input(const AgentId& id, const Eigen::VectorXd& obs,
                                           const Eigen::VectorXd& action) const {
  const Actor& a = actors_[agent_index(id)];
  const Eigen::VectorXd enc = a.space().encode(action);
  const int card = role_cardinality(id.role);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(obs.size() + enc.size() + card);
  z.head(obs.size()) = obs;
  z.segment(obs.size(), enc.size()) = enc;
  z[obs.size() + enc.size() + id.index] = 1.0;
  return z;
}

double MappoLearner::value(const AgentId& id, const Eigen::VectorXd& obs,
                           const Eigen::VectorXd& action) const {
  return critics_[static_cast<int>(id.role)].value(critic_input(id, obs, action));
}

double MappoLearner::clip_at(int step) const {
  const double frac = total_updates_ > 1
                          ? static_cast<double>(step) / (total_updates_ - 1)
                          : 1.0;
  return cfg_.clip_start + (cfg_.clip_end - cfg_.clip_start) * std::clamp(frac, 0.0, 1.0);
}

double MappoLearner::entropy_coef_at(int step) const {
  const double frac = total_updates_ > 1
                          ? static_cast<double>(step) / (total_updates_ - 1)
                          : 1.0;
  return cfg_.entropy_start +
         (cfg_.entropy_end - cfg_.entropy_start) * std::clamp(frac, 0.0, 1.0);
}

TrainStats MappoLearner::update(const EpisodeBatch& batch, int step_index,
                                const std::set<Role>& trained) {
  const int n_frames = static_cast<int>(batch.rewards.size());
  if (static_cast<int>(batch.trajectories.size()) != agent_count()) {
    throw std::invalid_argument("update: one trajectory per agent required");
  }
  const double clip_eps = clip_at(step_index);
  const double entropy_coef = entropy_coef_at(step_index);

  // Advantages from collection-time values, standardized per role. Roles
  // outside the trained set carry no trajectories and are skipped entirely.
  std::vector<GaeResult> gae(agent_count());
  for (int i = 0; i < agent_count(); ++i) {
    if (!trained.count(agents_[i].role)) continue;
    gae[i] = compute_gae(batch.rewards, batch.trajectories[i].value, cfg_.gamma,
                         cfg_.gae_lambda);
  }
  for (Role role : {Role::Lcp, Role::Lpb, Role::Fg, Role::Fpb}) {
    if (!trained.count(role)) continue;
    std::vector<std::vector<double>> pooled;
    std::vector<int> members;
    for (int i = 0; i < agent_count(); ++i) {
      if (agents_[i].role == role) {
        pooled.push_back(gae[i].advantages);
        members.push_back(i);
      }
    }
    standardize_advantages(pooled);
    for (std::size_t j = 0; j < members.size(); ++j) {
      gae[members[j]].advantages = pooled[j];
    }
  }

  TrainStats stats;
  double actor_loss_sum = 0.0;
  double entropy_sum = 0.0;
  double ratio_sum = 0.0;
  long actor_terms = 0;
  double critic_loss_sum = 0.0;
  long critic_terms = 0;
  double ev_num = 0.0, ev_den = 0.0;

  for (Role role : {Role::Lcp, Role::Lpb, Role::Fg, Role::Fpb}) {
    if (!trained.count(role)) continue;

    // Shared critic: one parameter set per role, all member agents pooled.
    Critic& cr = critics_[static_cast<int>(role)];
    std::vector<int> members;
    for (int i = 0; i < agent_count(); ++i) {
      if (agents_[i].role == role) members.push_back(i);
    }
    std::vector<Eigen::VectorXd> inputs;
    std::vector<double> targets;
    for (int i : members) {
      const AgentTrajectory& traj = batch.trajectories[i];
      for (int t = 0; t < n_frames; ++t) {
        inputs.push_back(critic_input(agents_[i], traj.obs[t], traj.actions[t]));
        targets.push_back(gae[i].returns[t]);
        const double resid = gae[i].returns[t] - traj.value[t];
        ev_num += resid * resid;
        ev_den += gae[i].returns[t] * gae[i].returns[t];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(inputs.size());
    for (int epoch = 0; epoch < cfg_.ppo_epochs; ++epoch) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(cr.param_count());
      double loss = 0.0;
      for (std::size_t s = 0; s < inputs.size(); ++s) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(cr.param_count());
        const double v = cr.value_with_grad(inputs[s], 1.0, g);
        const double resid = v - targets[s];
        loss += smooth_l1(resid);
        grad += cfg_.value_loss_weight * smooth_l1_grad(resid) * inv_n * g;
      }
      loss *= inv_n;
      critic_loss_sum += loss;
      ++critic_terms;
      if (!grad.allFinite()) {
        ++stats.skipped_steps;
        std::fprintf(stderr, "[entisac] warning: non-finite critic gradient (%s), step skipped\n",
                     role_name(role));
        continue;
      }
      critic_opts_[static_cast<int>(role)].step(cr.net().params(), grad);
    }

    // Per-agent actors.
    for (int i : members) {
      Actor& actor = actors_[i];
      const AgentTrajectory& traj = batch.trajectories[i];
      const double inv_t = 1.0 / static_cast<double>(n_frames);
      for (int epoch = 0; epoch < cfg_.ppo_epochs; ++epoch) {
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(actor.param_count());
        double loss = 0.0;
        for (int t = 0; t < n_frames; ++t) {
          const double adv = gae[i].advantages[t];
          // First pass to get the ratio, second pass accumulates gradients
          // with the clip-aware coefficient.
          const PolicyEval probe = actor.evaluate(traj.obs[t], traj.actions[t]);
          const double ratio = std::exp(probe.log_prob - traj.log_prob[t]);
          const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
          const double surrogate = std::min(ratio * adv, clipped * adv);
          loss -= (surrogate + entropy_coef * probe.entropy) * inv_t;
          const bool clip_active = ratio * adv > clipped * adv;
          const double coef_logp = clip_active ? 0.0 : -inv_t * ratio * adv;
          const double coef_ent = -inv_t * entropy_coef;
          actor.evaluate_with_grad(traj.obs[t], traj.actions[t], coef_logp, coef_ent, grad);
          if (epoch == 0) {
            ratio_sum += ratio;
            entropy_sum += probe.entropy;
            ++actor_terms;
          }
        }
        if (epoch == 0) actor_loss_sum += loss;
        if (!grad.allFinite()) {
          ++stats.skipped_steps;
          std::fprintf(stderr, "[entisac] warning: non-finite actor gradient (%s %d), step skipped\n",
                       role_name(role), agents_[i].index);
          continue;
        }
        Eigen::VectorXd params = actor.get_params();
        actor_opts_[i].step(params, grad);
        actor.set_params(params);
      }
    }
  }

  stats.actor_loss = actor_terms > 0 ? actor_loss_sum / (actor_terms / static_cast<double>(n_frames)) : 0.0;
  stats.critic_loss = critic_terms > 0 ? critic_loss_sum / critic_terms : 0.0;
  stats.entropy = actor_terms > 0 ? entropy_sum / actor_terms : 0.0;
  stats.mean_ratio = actor_terms > 0 ? ratio_sum / actor_terms : 1.0;
  stats.explained_variance = ev_den > 0.0 ? 1.0 - ev_num / ev_den : 0.0;
  ++train_step_;
  return stats;
}

namespace {

void write_bytes(std::ofstream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void write_u32(std::ofstream& out, std::uint32_t v) { write_bytes(out, &v, 4); }
void write_u64(std::ofstream& out, std::uint64_t v) { write_bytes(out, &v, 8); }

void write_vec(std::ofstream& out, const Eigen::VectorXd& v) {
  write_u64(out, static_cast<std::uint64_t>(v.size()));
  write_bytes(out, v.data(), sizeof(double) * v.size());
}

void read_bytes(std::ifstream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (!in) throw CheckpointError("checkpoint truncated");
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  read_bytes(in, &v, 4);
  return v;
}

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  read_bytes(in, &v, 8);
  return v;
}

Eigen::VectorXd read_vec(std::ifstream& in, const std::string& what, long expected) {
  const std::uint64_t n = read_u64(in);
  if (expected >= 0 && static_cast<long>(n) != expected) {
    throw CheckpointError("checkpoint incompatible at " + what + ": expected " +
                          std::to_string(expected) + " values, found " + std::to_string(n));
  }
  Eigen::VectorXd v(static_cast<long>(n));
  read_bytes(in, v.data(), sizeof(double) * n);
  return v;
}

constexpr char kCheckpointMagic[8] = {'E', 'N', 'T', 'C', 'K', 'P', 'T', '1'};

}  // namespace

void MappoLearner::save_checkpoint(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  write_bytes(out, kCheckpointMagic, 8);
  write_u64(out, train_step_);
  write_u32(out, static_cast<std::uint32_t>(actors_.size()));
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    write_u32(out, static_cast<std::uint32_t>(agents_[i].role));
    write_u32(out, static_cast<std::uint32_t>(agents_[i].index));
    const auto& sizes = actors_[i].net().layer_sizes();
    write_u32(out, static_cast<std::uint32_t>(sizes.size()));
    for (int s : sizes) write_u32(out, static_cast<std::uint32_t>(s));
    write_vec(out, actors_[i].get_params());
  }
  write_u32(out, static_cast<std::uint32_t>(critics_.size()));
  for (std::size_t i = 0; i < critics_.size(); ++i) {
    const auto& sizes = critics_[i].net().layer_sizes();
    write_u32(out, static_cast<std::uint32_t>(sizes.size()));
    for (int s : sizes) write_u32(out, static_cast<std::uint32_t>(s));
    write_vec(out, critics_[i].net().params());
  }
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

void MappoLearner::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  char magic[8];
  read_bytes(in, magic, 8);
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw CheckpointError("not an entisac checkpoint: " + path);
  }
  train_step_ = read_u64(in);
  const std::uint32_t n_actors = read_u32(in);
  if (n_actors != actors_.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(n_actors) + " actors, expected " +
                          std::to_string(actors_.size()));
  }
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    const std::string name = std::string("actor ") + role_name(agents_[i].role) + "[" +
                             std::to_string(agents_[i].index) + "]";
    const Role role = static_cast<Role>(read_u32(in));
    const int index = static_cast<int>(read_u32(in));
    if (role != agents_[i].role || index != agents_[i].index) {
      throw CheckpointError("checkpoint incompatible at " + name + ": role/index mismatch");
    }
    const std::uint32_t n_sizes = read_u32(in);
    const auto& sizes = actors_[i].net().layer_sizes();
    if (n_sizes != sizes.size()) {
      throw CheckpointError("checkpoint incompatible at " + name + ": layer count " +
                            std::to_string(n_sizes) + ", expected " + std::to_string(sizes.size()));
    }
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const std::uint32_t got = read_u32(in);
      if (static_cast<int>(got) != sizes[s]) {
        throw CheckpointError("checkpoint incompatible at " + name + " layer " +
                              std::to_string(s) + ": width " + std::to_string(got) +
                              ", expected " + std::to_string(sizes[s]));
      }
    }
    actors_[i].set_params(read_vec(in, name, actors_[i].param_count()));
  }
  const std::uint32_t n_critics = read_u32(in);
  if (n_critics != critics_.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(n_critics) +
                          " critics, expected " + std::to_string(critics_.size()));
  }
  const char* critic_names[] = {"LCP", "LPB", "FG", "FPB"};
  for (std::size_t i = 0; i < critics_.size(); ++i) {
    const std::string name = std::string("critic ") + critic_names[i];
    const std::uint32_t n_sizes = read_u32(in);
    const auto& sizes = critics_[i].net().layer_sizes();
    if (n_sizes != sizes.size()) {
      throw CheckpointError("checkpoint incompatible at " + name + ": layer count mismatch");
    }
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const std::uint32_t got = read_u32(in);
      if (static_cast<int>(got) != sizes[s]) {
        throw CheckpointError("checkpoint incompatible at " + name + " layer " +
                              std::to_string(s) + ": width " + std::to_string(got) +
                              ", expected " + std::to_string(sizes[s]));
      }
    }
    critics_[i].net().params() = read_vec(in, name, critics_[i].param_count());
  }
}

}  // namespace entisac
