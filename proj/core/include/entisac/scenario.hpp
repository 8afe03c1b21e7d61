#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entisac/rng.hpp"

namespace entisac {

/// Immutable per-run configuration: geometry, per-cell node counts, radio
/// parameters, and training hyperparameters. Defaults follow the reference
/// deployment (4 cells, 2 clusters, 3 APs and 4+4 services per cell).
struct ScenarioConfig {
  // Topology sizes.
  int m = 4;       ///< cells
  int r = 2;       ///< clusters
  int a = 3;       ///< APs per cell
  int k = 4;       ///< communication users per cell
  int q = 4;       ///< radar targets per cell
  int n_tx = 4;    ///< antennas per AP
  int b = 16;      ///< subcarriers per cell/subband
  int l = 100;     ///< slots per frame
  int n_t = 20;    ///< frames per episode
  int m_max = 4;   ///< max cells per cluster

  // Radio parameters.
  double delta_f = 156.25e3;      ///< subcarrier spacing (Hz)
  double f_c = 5.89e9;            ///< carrier frequency (Hz)
  double t_sym = 0.0;             ///< slot duration (s); 0 -> 1/delta_f
  double t_bar = 0.0;             ///< frame duration (s); 0 -> l * t_sym
  double p_max = 10.0;            ///< AP power budget (W), 40 dBm
  double p_ce = 0.31622776601683794;  ///< uplink pilot power (W), 25 dBm
  int d_ce = 1;                   ///< pilot slots per user
  double rho_ak = 0.98;           ///< frame-to-frame channel correlation
  double kappa_bar = 4.0;         ///< Rician factor
  double delta_q = 100.0;         ///< target process-noise intensity
  double sigma_rcs = 1.0;         ///< target radar cross section (m^2)
  double g_r = 1.0;               ///< radar processing gain
  double n0 = 3.9810717055349695e-21;  ///< noise density (W/Hz), -174 dBm/Hz
  double area = 600.0;            ///< square side length (m)
  double v_range_min = 20.0;      ///< min initial target speed (m/s)
  double v_range_max = 80.0;      ///< max initial target speed (m/s)
  double o = 0.0;                 ///< overhead normalizer; 0 -> 8*m*(a-1)*n_tx*k
  double o_bar_m = 0.0;           ///< base per-cell overhead; 0 -> 0.7*o

  // Utility normalization bounds.
  double u_k_c_min = 0.05;   ///< rate bound (nats/s/Hz)
  double u_k_c_max = 0.35;
  double u_q_rp_min = 5e-5;  ///< position-error bound (m^2)
  double u_q_rp_max = 2.0;
  double u_q_rv_min = 5e-5;  ///< velocity-error bound ((m/s)^2)
  double u_q_rv_max = 2.0;

  // Action grid and belief initialization.
  int delta_theta = 8;       ///< discrete beam-angle levels
  double j0_sigma_p = 10.0;  ///< initial position belief std (m)
  double j0_sigma_v = 5.0;   ///< initial velocity belief std (m/s)

  // Training hyperparameters.
  double gamma = 0.9;
  double gae_lambda = 0.96;
  double clip_start = 0.3;
  double clip_end = 0.15;
  double entropy_start = 1e-3;
  double entropy_end = 1e-4;
  double value_loss_weight = 0.5;
  double learning_rate = 5e-5;
  int ppo_epochs = 4;
  std::vector<int> actor_hidden = {256, 256, 256, 256};
  std::vector<int> critic_hidden = {512, 512, 512};

  std::uint64_t rng_seed = 1;

  // Derived quantities (after validate()).
  double slot_duration() const { return t_sym; }
  double frame_duration() const { return t_bar; }
  double noise_power() const { return n0 * delta_f; }  ///< per-subcarrier (W)
  int num_aps() const { return m * a; }
  int num_users() const { return m * k; }
  int num_targets() const { return m * q; }
  /// Carrier frequency of subband i (0-based).
  double subband_carrier(int i) const { return f_c + static_cast<double>(i) * b * delta_f; }
  /// Grid angle for 0-based level index.
  double grid_angle(int idx) const;

  /// Fills derived defaults and throws ConfigError naming the violated
  /// invariant otherwise.
  void validate();

  /// Reads a key=value config file. Unknown keys are rejected.
  static ScenarioConfig from_file(const std::string& path);
  /// Parses config text (same format as from_file).
  static ScenarioConfig from_string(const std::string& text);
};

/// A concrete deployment: node placement, initial target kinematics, and
/// per-node noise powers. Immutable after construction; share freely.
struct Scenario {
  ScenarioConfig config;
  std::vector<Eigen::Vector2d> ap_positions;    ///< m*a entries, cell-major
  std::vector<Eigen::Vector2d> user_positions;  ///< m*k entries
  std::vector<Eigen::Vector4d> target_states;   ///< m*q entries [x y vx vy]
  Eigen::VectorXd ap_noise;    ///< sigma_a (W)
  Eigen::VectorXd user_noise;  ///< sigma_k (W)

  int cell_of_ap(int ap) const { return ap / config.a; }
  int cell_of_user(int user) const { return user / config.k; }
  int cell_of_target(int tgt) const { return tgt / config.q; }
  std::vector<int> aps_in_cell(int cell) const;
  std::vector<int> users_in_cell(int cell) const;
  std::vector<int> targets_in_cell(int cell) const;

  /// Byte serialization of all numeric content, for determinism checks.
  std::string serialize() const;
};

/// Deterministic construction: APs on an even per-cell grid, users and
/// targets uniform inside their cell, headings uniform and speeds in
/// [v_range_min, v_range_max].
Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// Offsets every node position by up to 1% of the area per axis, clamped to
/// the area; velocities untouched.
Scenario perturb_positions(const Scenario& scenario, RandomStream& rng);

/// perturb_positions with a caller-supplied offset source in [-1, 1];
/// the public overload forwards uniform draws here.
Scenario perturb_positions_with(const Scenario& scenario,
                                const std::function<double()>& unit_offset);

}  // namespace entisac
