#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entisac/kinematics.hpp"
#include "entisac/regime.hpp"
#include "entisac/scenario.hpp"
#include "entisac/topology.hpp"

namespace entisac {

/// Per-target tracking belief: previous-frame Bayesian information matrix and
/// posterior estimate, plus the prediction used by the current frame.
struct SensingBelief {
  Eigen::Matrix4d j_prev = Eigen::Matrix4d::Identity();  ///< symmetric PD
  Eigen::Vector4d x_est = Eigen::Vector4d::Zero();       ///< posterior at n-1
  Eigen::Vector4d x_pred = Eigen::Vector4d::Zero();      ///< prediction for n
};

/// Position/cross/velocity blocks contributed by one AP pair.
struct FimPair {
  Eigen::Matrix2d f_p = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d f_pv = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d f_v = Eigen::Matrix2d::Zero();

  Eigen::Matrix4d assemble() const {
    Eigen::Matrix4d f;
    f << f_p, f_pv, f_pv.transpose(), f_v;
    return f;
  }
};

/// Round-trip fading power of the cascaded path a' -> target -> a.
double cascaded_fading(const Eigen::Vector2d& target_pos, const Eigen::Vector2d& ap_a,
                       const Eigen::Vector2d& ap_a2, double g_r, int n_tx,
                       double sigma_rcs, double f_c);

/// Illumination power toward the target direction from one transmitting AP:
/// every served beam contributes through its array response at that angle.
double sense_gain(int ap_tx, int target, int subband, const RegimeContext& ctx,
                  const BeamPowerPlan& plan, double theta_tx_target, int n_tx);

/// Delay/Doppler curvature weights accumulated over (subband, subcarrier,
/// slot); index sums are closed-form.
struct WaveformWeights {
  double w_tt = 0.0;  ///< delay-delay
  double w_ff = 0.0;  ///< Doppler-Doppler
  double w_tf = 0.0;  ///< delay-Doppler cross
};

WaveformWeights waveform_weights(const std::vector<double>& gain_per_subband,
                                 const std::vector<int>& b_per_subband,
                                 const std::vector<int>& l_per_subband,
                                 const std::vector<double>& carrier_ratio,
                                 double lambda_fading, double delta_f, double t_sym);

/// One AP pair's information blocks from the weights and the delay/Doppler
/// gradients.
FimPair fim_pair(const WaveformWeights& w, const DelayDoppler& dd);

/// Full 4x4 Fisher information about a target state: all ordered AP pairs of
/// the context, receive-noise weighted, symmetrized.
Eigen::Matrix4d fim_total(int target, const TargetState& state, const RegimeContext& ctx,
                          const BeamPowerPlan& plan, const Scenario& scenario,
                          const std::vector<int>& b_per_subband,
                          const std::vector<int>& l_per_subband);

/// Bayesian information recursion: prediction-side prior plus the diagonal
/// measurement information. A singular measurement FIM contributes only along
/// its informative diagonal entries.
Eigen::Matrix4d bfim_update(const SensingBelief& belief, const Eigen::Matrix4d& f_meas,
                            const Eigen::Matrix4d& process_cov,
                            const Eigen::Matrix4d& transition);

/// (position error m^2, velocity error (m/s)^2) from the inverse information.
std::pair<double, double> sensing_errors(const Eigen::Matrix4d& j);

/// State prediction x_pred = G x_est.
Eigen::Vector4d predict_state(const SensingBelief& belief, const Eigen::Matrix4d& transition);

}  // namespace entisac
