#include "entisac/policy.hpp"

#include <cmath>
#include <numbers>

#include "entisac/errors.hpp"

namespace entisac {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 ln(2 pi)

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

int ActionSpace::logit_dim() const {
  int n = 0;
  for (const auto& c : components) {
    n += c.kind == ComponentKind::Categorical ? c.levels : 1;
  }
  return n;
}

int ActionSpace::encoded_dim() const {
  int n = 0;
  for (const auto& c : components) {
    n += c.kind == ComponentKind::Categorical ? c.levels : 1;
  }
  return n;
}

int ActionSpace::continuous_count() const {
  int n = 0;
  for (const auto& c : components) {
    if (c.kind == ComponentKind::Continuous) ++n;
  }
  return n;
}

Eigen::VectorXd ActionSpace::encode(const Eigen::VectorXd& action) const {
  Eigen::VectorXd enc = Eigen::VectorXd::Zero(encoded_dim());
  int at = 0;
  for (int c = 0; c < action_dim(); ++c) {
    const auto& comp = components[c];
    switch (comp.kind) {
      case ComponentKind::Binary:
        enc[at++] = action[c];
        break;
      case ComponentKind::Categorical: {
        const int idx = std::min(comp.levels - 1,
                                 std::max(0, static_cast<int>(std::llround(action[c]))));
        enc[at + idx] = 1.0;
        at += comp.levels;
        break;
      }
      case ComponentKind::Continuous:
        enc[at++] = (action[c] - comp.lo) / std::max(comp.hi - comp.lo, 1e-300);
        break;
    }
  }
  return enc;
}

Actor::Actor(ActionSpace space, int obs_dim, const std::vector<int>& hidden,
             RandomStream& init_rng)
    : space_(std::move(space)) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(space_.logit_dim());
  net_ = Mlp(sizes);
  net_.init_weights(init_rng);
  log_std_ = Eigen::VectorXd::Zero(space_.continuous_count());
}

Eigen::VectorXd Actor::get_params() const {
  Eigen::VectorXd flat(param_count());
  flat << net_.params(), log_std_;
  return flat;
}

void Actor::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("Actor::set_params: size mismatch");
  }
  net_.params() = flat.head(net_.param_count());
  log_std_ = flat.tail(log_std_.size());
}

PolicySample Actor::sample(const Eigen::VectorXd& obs, RandomStream& rng) const {
  const Eigen::VectorXd logits = net_.forward(obs);
  PolicySample out;
  out.action.resize(space_.action_dim());
  int at = 0;
  int cont = 0;
  for (int c = 0; c < space_.action_dim(); ++c) {
    const auto& comp = space_.components[c];
    switch (comp.kind) {
      case ComponentKind::Binary: {
        const double p = sigmoid(logits[at++]);
        out.action[c] = rng.uniform() < p ? 1.0 : 0.0;
        break;
      }
      case ComponentKind::Categorical: {
        const Eigen::VectorXd block = logits.segment(at, comp.levels);
        const double lse = std::log((block.array() - block.maxCoeff()).exp().sum()) +
                           block.maxCoeff();
        const double u = rng.uniform();
        double cdf = 0.0;
        int pick = comp.levels - 1;
        for (int j = 0; j < comp.levels; ++j) {
          cdf += std::exp(block[j] - lse);
          if (u < cdf) {
            pick = j;
            break;
          }
        }
        out.action[c] = static_cast<double>(pick);
        at += comp.levels;
        break;
      }
      case ComponentKind::Continuous: {
        const double mu = logits[at++];
        const double sd = std::exp(log_std_[cont++]);
        const double z = mu + sd * rng.normal();
        out.action[c] = comp.lo + (comp.hi - comp.lo) * sigmoid(z);
        break;
      }
    }
  }
  const PolicyEval ev = evaluate(obs, out.action);
  out.log_prob = ev.log_prob;
  out.entropy = ev.entropy;
  return out;
}

Eigen::VectorXd Actor::mode(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd logits = net_.forward(obs);
  Eigen::VectorXd action(space_.action_dim());
  int at = 0;
  for (int c = 0; c < space_.action_dim(); ++c) {
    const auto& comp = space_.components[c];
    switch (comp.kind) {
      case ComponentKind::Binary:
        action[c] = logits[at++] > 0.0 ? 1.0 : 0.0;
        break;
      case ComponentKind::Categorical: {
        int best = 0;
        for (int j = 1; j < comp.levels; ++j) {
          if (logits[at + j] > logits[at + best]) best = j;
        }
        action[c] = static_cast<double>(best);
        at += comp.levels;
        break;
      }
      case ComponentKind::Continuous:
        action[c] = comp.lo + (comp.hi - comp.lo) * sigmoid(logits[at++]);
        break;
    }
  }
  return action;
}

PolicyEval Actor::heads(const Eigen::VectorXd& logits, const Eigen::VectorXd& action,
                        Eigen::VectorXd* d_logits_logp, Eigen::VectorXd* d_logits_ent,
                        Eigen::VectorXd* d_logstd_logp, Eigen::VectorXd* d_logstd_ent) const {
  PolicyEval ev;
  int at = 0;
  int cont = 0;
  for (int c = 0; c < space_.action_dim(); ++c) {
    const auto& comp = space_.components[c];
    switch (comp.kind) {
      case ComponentKind::Binary: {
        const double t = logits[at];
        const double p = sigmoid(t);
        const double bit = action[c];
        if (bit != 0.0 && bit != 1.0) {
          throw NumericError("policy evaluate: binary action outside {0,1}");
        }
        ev.log_prob += bit > 0.5 ? -softplus(-t) : -softplus(t);
        ev.entropy += p * softplus(-t) + (1.0 - p) * softplus(t);
        if (d_logits_logp) (*d_logits_logp)[at] = bit - p;
        if (d_logits_ent) (*d_logits_ent)[at] = -t * p * (1.0 - p);
        ++at;
        break;
      }
      case ComponentKind::Categorical: {
        const int idx = static_cast<int>(std::llround(action[c]));
        if (idx < 0 || idx >= comp.levels) {
          throw NumericError("policy evaluate: categorical action out of range");
        }
        const Eigen::VectorXd block = logits.segment(at, comp.levels);
        const double mx = block.maxCoeff();
        const double lse = std::log((block.array() - mx).exp().sum()) + mx;
        const Eigen::VectorXd probs = (block.array() - lse).exp();
        ev.log_prob += block[idx] - lse;
        double h = 0.0;
        for (int j = 0; j < comp.levels; ++j) {
          if (probs[j] > 0.0) h -= probs[j] * (block[j] - lse);
        }
        ev.entropy += h;
        if (d_logits_logp) {
          for (int j = 0; j < comp.levels; ++j) {
            (*d_logits_logp)[at + j] = (j == idx ? 1.0 : 0.0) - probs[j];
          }
        }
        if (d_logits_ent) {
          for (int j = 0; j < comp.levels; ++j) {
            (*d_logits_ent)[at + j] = -probs[j] * ((block[j] - lse) + h);
          }
        }
        at += comp.levels;
        break;
      }
      case ComponentKind::Continuous: {
        const double a = action[c];
        if (a < comp.lo || a > comp.hi) {
          throw NumericError("policy evaluate: continuous action outside its box");
        }
        const double width = comp.hi - comp.lo;
        double u = (a - comp.lo) / width;
        u = std::min(1.0 - 1e-12, std::max(1e-12, u));
        const double z = std::log(u) - std::log1p(-u);  // logit
        const double mu = logits[at];
        const double ls = log_std_[cont];
        const double sd = std::exp(ls);
        const double w = (z - mu) / sd;
        // Squashed Gaussian: Gaussian density in z-space plus the
        // change-of-variables term of the sigmoid map into the box.
        ev.log_prob += -0.5 * w * w - ls - kHalfLog2Pi -
                       (std::log(width) + std::log(u) + std::log1p(-u));
        ev.entropy += ls + kHalfLog2Pi + 0.5;  // pre-squash closed form
        if (d_logits_logp) (*d_logits_logp)[at] = w / sd;
        if (d_logstd_logp) (*d_logstd_logp)[cont] = w * w - 1.0;
        if (d_logstd_ent) (*d_logstd_ent)[cont] = 1.0;
        ++at;
        ++cont;
        break;
      }
    }
  }
  return ev;
}

PolicyEval Actor::evaluate(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const {
  if (action.size() != space_.action_dim()) {
    throw NumericError("policy evaluate: action length mismatch");
  }
  const Eigen::VectorXd logits = net_.forward(obs);
  return heads(logits, action, nullptr, nullptr, nullptr, nullptr);
}

PolicyEval Actor::evaluate_with_grad(const Eigen::VectorXd& obs, const Eigen::VectorXd& action,
                                     double coef_logp, double coef_entropy,
                                     Eigen::VectorXd& grad) const {
  if (grad.size() != param_count()) {
    throw std::invalid_argument("Actor::evaluate_with_grad: gradient buffer size mismatch");
  }
  Mlp::Trace trace;
  const Eigen::VectorXd logits = net_.forward(obs, trace);
  Eigen::VectorXd d_logits_logp = Eigen::VectorXd::Zero(space_.logit_dim());
  Eigen::VectorXd d_logits_ent = Eigen::VectorXd::Zero(space_.logit_dim());
  Eigen::VectorXd d_logstd_logp = Eigen::VectorXd::Zero(log_std_.size());
  Eigen::VectorXd d_logstd_ent = Eigen::VectorXd::Zero(log_std_.size());
  const PolicyEval ev =
      heads(logits, action, &d_logits_logp, &d_logits_ent, &d_logstd_logp, &d_logstd_ent);

  const Eigen::VectorXd d_logits = coef_logp * d_logits_logp + coef_entropy * d_logits_ent;
  Eigen::VectorXd net_grad = grad.head(net_.param_count());
  net_.backward(trace, d_logits, net_grad);
  grad.head(net_.param_count()) = net_grad;
  grad.tail(log_std_.size()) += coef_logp * d_logstd_logp + coef_entropy * d_logstd_ent;
  return ev;
}

Critic::Critic(int input_dim, const std::vector<int>& hidden, RandomStream& init_rng) {
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  net_ = Mlp(sizes);
  net_.init_weights(init_rng);
}

double Critic::value(const Eigen::VectorXd& input) const { return net_.forward(input)[0]; }

double Critic::value_with_grad(const Eigen::VectorXd& input, double coef,
                               Eigen::VectorXd& grad) const {
  Mlp::Trace trace;
  const Eigen::VectorXd out = net_.forward(input, trace);
  Eigen::VectorXd d_out(1);
  d_out[0] = coef;
  net_.backward(trace, d_out, grad);
  return out[0];
}

ActionSpace lcp_action_space(const ScenarioConfig& cfg) {
  ActionSpace s;
  for (int i = 0; i < cfg.k + cfg.q; ++i) {
    s.components.push_back({ComponentKind::Binary, 0, 0.0, 1.0});
  }
  for (int i = 0; i < cfg.a; ++i) {
    s.components.push_back({ComponentKind::Continuous, 0, 0.0, cfg.p_max});
  }
  s.components.push_back({ComponentKind::Continuous, 0, 0.0, static_cast<double>(cfg.b)});
  return s;
}

ActionSpace lpb_action_space(const ScenarioConfig& cfg) {
  ActionSpace s;
  for (int a = 0; a < cfg.a; ++a) {
    for (int i = 0; i < cfg.k + cfg.q; ++i) {
      s.components.push_back({ComponentKind::Continuous, 0, 0.0, cfg.p_max});
    }
    for (int i = 0; i < cfg.k + cfg.q; ++i) {
      s.components.push_back({ComponentKind::Categorical, cfg.delta_theta, 0.0, 0.0});
    }
  }
  return s;
}

ActionSpace fg_action_space(const ScenarioConfig& cfg) {
  ActionSpace s;
  for (int m = 0; m < cfg.m; ++m) {
    s.components.push_back({ComponentKind::Categorical, cfg.r, 0.0, 0.0});
  }
  return s;
}

ActionSpace fpb_action_space(const ScenarioConfig& cfg) {
  ActionSpace s;
  const int ent = cfg.m * (cfg.k + cfg.q);
  for (int a = 0; a < cfg.num_aps(); ++a) {
    for (int i = 0; i < ent; ++i) {
      s.components.push_back({ComponentKind::Continuous, 0, 0.0, cfg.p_max});
    }
    for (int i = 0; i < ent; ++i) {
      s.components.push_back({ComponentKind::Categorical, cfg.delta_theta, 0.0, 0.0});
    }
  }
  return s;
}

}  // namespace entisac
