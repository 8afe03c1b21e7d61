#include "entisac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "entisac/errors.hpp"

namespace entisac {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("config invariant violated: ") + what);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

}  // namespace

double ScenarioConfig::grid_angle(int idx) const {
  // Levels 1..delta_theta mapped to (-pi/2, pi/2]; idx is 0-based.
  return (-0.5 + static_cast<double>(idx + 1) / delta_theta) * std::numbers::pi;
}

void ScenarioConfig::validate() {
  require(m >= 1, "m >= 1");
  require(r >= 1 && r <= m, "1 <= r <= m");
  require(m_max >= 1 && m_max <= m, "1 <= m_max <= m");
  require(static_cast<long>(r) * m_max >= m, "r * m_max >= m (grouping must be able to cover all cells)");
  require(a >= 1, "a >= 1");
  require(k >= 1, "k >= 1");
  require(q >= 1, "q >= 1");
  require(n_tx >= 1, "n_tx >= 1");
  require(b >= 1, "b >= 1");
  require(l >= 1, "l >= 1");
  require(n_t >= 1, "n_t >= 1");
  require(delta_f > 0, "delta_f > 0");
  require(f_c > 0, "f_c > 0");
  require(p_max > 0, "p_max > 0");
  require(p_ce > 0, "p_ce > 0");
  require(d_ce >= 1, "d_ce >= 1");
  require(rho_ak >= 0.0 && rho_ak <= 1.0, "0 <= rho_ak <= 1");
  require(kappa_bar >= 0.0, "kappa_bar >= 0");
  require(delta_q >= 0.0, "delta_q >= 0");
  require(sigma_rcs > 0.0, "sigma_rcs > 0");
  require(g_r > 0.0, "g_r > 0");
  require(n0 > 0.0, "n0 > 0");
  require(area > 0.0, "area > 0");
  require(v_range_min >= 0.0 && v_range_max >= v_range_min, "valid v_range");
  require(d_ce * k < l, "d_ce * k < l (estimation must leave transmission slots)");
  require(u_k_c_max > u_k_c_min, "u_k_c_max > u_k_c_min");
  require(u_q_rp_max > u_q_rp_min && u_q_rp_min > 0, "valid u_q_rp bounds");
  require(u_q_rv_max > u_q_rv_min && u_q_rv_min > 0, "valid u_q_rv bounds");
  require(delta_theta >= 1, "delta_theta >= 1");
  require(ppo_epochs >= 1, "ppo_epochs >= 1");
  require(learning_rate > 0, "learning_rate > 0");
  require(!actor_hidden.empty() && !critic_hidden.empty(), "nonempty hidden layer lists");

  if (t_sym <= 0.0) t_sym = 1.0 / delta_f;
  if (t_bar <= 0.0) t_bar = l * t_sym;
  if (o <= 0.0) o = 8.0 * m * (a - 1) * n_tx * k;
  require(o > 0.0, "o > 0 (needs a > 1 or an explicit value)");
  if (o_bar_m <= 0.0) o_bar_m = 0.7 * o;
}

ScenarioConfig ScenarioConfig::from_string(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      auto e = s.find_last_not_of(" \t\r\n");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto take_num = [&kv](const char* key, auto& field) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<T, int>) {
      field = std::stoi(it->second);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      field = std::stoull(it->second);
    } else {
      field = std::stod(it->second);
    }
    kv.erase(it);
  };

  take_num("m", cfg.m);
  take_num("r", cfg.r);
  take_num("a", cfg.a);
  take_num("k", cfg.k);
  take_num("q", cfg.q);
  take_num("n_tx", cfg.n_tx);
  take_num("b", cfg.b);
  take_num("l", cfg.l);
  take_num("n_t", cfg.n_t);
  take_num("m_max", cfg.m_max);
  take_num("delta_f", cfg.delta_f);
  take_num("f_c", cfg.f_c);
  take_num("t_sym", cfg.t_sym);
  take_num("t_bar", cfg.t_bar);
  take_num("p_max", cfg.p_max);
  take_num("p_ce", cfg.p_ce);
  take_num("d_ce", cfg.d_ce);
  take_num("rho_ak", cfg.rho_ak);
  take_num("kappa_bar", cfg.kappa_bar);
  take_num("delta_q", cfg.delta_q);
  take_num("sigma_rcs", cfg.sigma_rcs);
  take_num("g_r", cfg.g_r);
  take_num("n0", cfg.n0);
  take_num("area", cfg.area);
  take_num("o", cfg.o);
  take_num("o_bar_m", cfg.o_bar_m);
  take_num("u_k_c_min", cfg.u_k_c_min);
  take_num("u_k_c_max", cfg.u_k_c_max);
  take_num("u_q_rp_min", cfg.u_q_rp_min);
  take_num("u_q_rp_max", cfg.u_q_rp_max);
  take_num("u_q_rv_min", cfg.u_q_rv_min);
  take_num("u_q_rv_max", cfg.u_q_rv_max);
  take_num("delta_theta", cfg.delta_theta);
  take_num("j0_sigma_p", cfg.j0_sigma_p);
  take_num("j0_sigma_v", cfg.j0_sigma_v);
  take_num("gamma", cfg.gamma);
  take_num("gae_lambda", cfg.gae_lambda);
  take_num("clip_start", cfg.clip_start);
  take_num("clip_end", cfg.clip_end);
  take_num("entropy_start", cfg.entropy_start);
  take_num("entropy_end", cfg.entropy_end);
  take_num("value_loss_weight", cfg.value_loss_weight);
  take_num("learning_rate", cfg.learning_rate);
  take_num("ppo_epochs", cfg.ppo_epochs);
  take_num("rng_seed", cfg.rng_seed);

  if (auto it = kv.find("v_range"); it != kv.end()) {
    std::string v = it->second;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::stringstream vs(v);
    if (!(vs >> cfg.v_range_min >> cfg.v_range_max)) {
      throw ConfigError("v_range expects two numbers (min max)");
    }
    kv.erase(it);
  }
  if (auto it = kv.find("actor_hidden"); it != kv.end()) {
    cfg.actor_hidden = parse_int_list(it->second);
    kv.erase(it);
  }
  if (auto it = kv.find("critic_hidden"); it != kv.end()) {
    cfg.critic_hidden = parse_int_list(it->second);
    kv.erase(it);
  }

  if (!kv.empty()) {
    throw ConfigError("unknown config key: " + kv.begin()->first);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

std::vector<int> Scenario::aps_in_cell(int cell) const {
  std::vector<int> out(config.a);
  for (int i = 0; i < config.a; ++i) out[i] = cell * config.a + i;
  return out;
}

std::vector<int> Scenario::users_in_cell(int cell) const {
  std::vector<int> out(config.k);
  for (int i = 0; i < config.k; ++i) out[i] = cell * config.k + i;
  return out;
}

std::vector<int> Scenario::targets_in_cell(int cell) const {
  std::vector<int> out(config.q);
  for (int i = 0; i < config.q; ++i) out[i] = cell * config.q + i;
  return out;
}

std::string Scenario::serialize() const {
  std::string out;
  auto put = [&out](double v) {
    char buf[sizeof(double)];
    std::memcpy(buf, &v, sizeof(double));
    out.append(buf, sizeof(double));
  };
  for (const auto& p : ap_positions) { put(p.x()); put(p.y()); }
  for (const auto& p : user_positions) { put(p.x()); put(p.y()); }
  for (const auto& s : target_states) { for (int i = 0; i < 4; ++i) put(s[i]); }
  for (int i = 0; i < ap_noise.size(); ++i) put(ap_noise[i]);
  for (int i = 0; i < user_noise.size(); ++i) put(user_noise[i]);
  return out;
}

Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  ScenarioConfig cfg = config;
  cfg.validate();

  Scenario sc;
  sc.config = cfg;
  sc.ap_positions.reserve(cfg.num_aps());
  sc.user_positions.reserve(cfg.num_users());
  sc.target_states.reserve(cfg.num_targets());

  // Cells tile the square area on a near-square grid.
  const int cell_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.m))));
  const int cell_rows = (cfg.m + cell_cols - 1) / cell_cols;
  const double cw = cfg.area / cell_cols;
  const double ch = cfg.area / cell_rows;

  // APs on an even sub-grid inside each cell.
  const int ap_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.a))));
  const int ap_rows = (cfg.a + ap_cols - 1) / ap_cols;

  RandomStream rng = RandomStream::child(seed, "scenario");

  for (int m = 0; m < cfg.m; ++m) {
    const double x0 = (m % cell_cols) * cw;
    const double y0 = (m / cell_cols) * ch;
    for (int i = 0; i < cfg.a; ++i) {
      const int ci = i % ap_cols;
      const int ri = i / ap_cols;
      sc.ap_positions.emplace_back(x0 + cw * (ci + 1.0) / (ap_cols + 1.0),
                                   y0 + ch * (ri + 1.0) / (ap_rows + 1.0));
    }
  }
  for (int m = 0; m < cfg.m; ++m) {
    const double x0 = (m % cell_cols) * cw;
    const double y0 = (m / cell_cols) * ch;
    for (int i = 0; i < cfg.k; ++i) {
      sc.user_positions.emplace_back(x0 + rng.uniform(0.0, cw), y0 + rng.uniform(0.0, ch));
    }
  }
  for (int m = 0; m < cfg.m; ++m) {
    const double x0 = (m % cell_cols) * cw;
    const double y0 = (m / cell_cols) * ch;
    for (int i = 0; i < cfg.q; ++i) {
      Eigen::Vector4d s;
      s[0] = x0 + rng.uniform(0.0, cw);
      s[1] = y0 + rng.uniform(0.0, ch);
      const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double speed = rng.uniform(cfg.v_range_min, cfg.v_range_max);
      s[2] = speed * std::cos(heading);
      s[3] = speed * std::sin(heading);
      sc.target_states.push_back(s);
    }
  }

  sc.ap_noise = Eigen::VectorXd::Constant(cfg.num_aps(), cfg.noise_power());
  sc.user_noise = Eigen::VectorXd::Constant(cfg.num_users(), cfg.noise_power());
  return sc;
}

Scenario perturb_positions_with(const Scenario& scenario,
                                const std::function<double()>& unit_offset) {
  Scenario out = scenario;
  const double bound = 0.01 * scenario.config.area;
  const double hi = scenario.config.area;
  auto nudge = [&](double v) {
    double moved = v + bound * unit_offset();
    return std::clamp(moved, 0.0, hi);
  };
  for (auto& p : out.ap_positions) { p.x() = nudge(p.x()); p.y() = nudge(p.y()); }
  for (auto& p : out.user_positions) { p.x() = nudge(p.x()); p.y() = nudge(p.y()); }
  for (auto& s : out.target_states) { s[0] = nudge(s[0]); s[1] = nudge(s[1]); }
  return out;
}

Scenario perturb_positions(const Scenario& scenario, RandomStream& rng) {
  return perturb_positions_with(scenario, [&rng] { return rng.uniform(-1.0, 1.0); });
}

}  // namespace entisac
