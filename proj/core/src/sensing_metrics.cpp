#include "entisac/sensing_metrics.hpp"

#include <cmath>
#include <numbers>

#include "entisac/errors.hpp"

namespace entisac {

namespace {

/// sum_{x=0}^{n-1} x and sum_{x=0}^{n-1} x^2.
double index_sum(int n) { return 0.5 * n * (n - 1.0); }
double index_sq_sum(int n) { return n * (n - 1.0) * (2.0 * n - 1.0) / 6.0; }

/// Pseudo-inverse of a symmetric PSD matrix via eigendecomposition.
Eigen::Matrix4d psd_pinv(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  const Eigen::Vector4d ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::Vector4d inv = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    if (ev[i] > cutoff && ev[i] > 0.0) inv[i] = 1.0 / ev[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double cascaded_fading(const Eigen::Vector2d& target_pos, const Eigen::Vector2d& ap_a,
                       const Eigen::Vector2d& ap_a2, double g_r, int n_tx,
                       double sigma_rcs, double f_c) {
  const double d2_a = (target_pos - ap_a).squaredNorm();
  const double d2_a2 = (target_pos - ap_a2).squaredNorm();
  if (d2_a <= 0.0 || d2_a2 <= 0.0) {
    throw GeometryError("cascaded_fading: target co-located with an AP");
  }
  const double four_pi = 4.0 * std::numbers::pi;
  const double num = g_r * static_cast<double>(n_tx) * n_tx * kSpeedOfLight * kSpeedOfLight * sigma_rcs;
  const double den = four_pi * four_pi * four_pi * f_c * f_c * d2_a * d2_a * d2_a2 * d2_a2;
  return num / den;
}

double sense_gain(int ap_tx, int target, int subband, const RegimeContext& ctx,
                  const BeamPowerPlan& plan, double theta_tx_target, int n_tx) {
  (void)target;
  const Eigen::VectorXcd v = steering(theta_tx_target, n_tx);
  double gain = 0.0;
  for (int k : ctx.comm_users) {
    const double p = plan.comm_power(ap_tx, k);
    if (p <= 0.0) continue;
    gain += p * std::norm(v.dot(plan.comm_beam(ap_tx, k, subband)));
  }
  for (int q : ctx.targets) {
    const double p = plan.radar_power(ap_tx, q);
    if (p <= 0.0) continue;
    gain += p * std::norm(v.dot(plan.radar_beam(ap_tx, q)));
  }
  return gain;
}

WaveformWeights waveform_weights(const std::vector<double>& gain_per_subband,
                                 const std::vector<int>& b_per_subband,
                                 const std::vector<int>& l_per_subband,
                                 const std::vector<double>& carrier_ratio,
                                 double lambda_fading, double delta_f, double t_sym) {
  WaveformWeights w;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < gain_per_subband.size(); ++i) {
    const double g = lambda_fading * gain_per_subband[i];
    const int b = b_per_subband[i];
    const int l = l_per_subband[i];
    w.w_tt += 8.0 * pi2 * delta_f * delta_f * g * l * index_sq_sum(b);
    w.w_ff += 8.0 * pi2 * t_sym * t_sym * carrier_ratio[i] * carrier_ratio[i] * g * b * index_sq_sum(l);
    w.w_tf += 8.0 * pi2 * t_sym * delta_f * g * index_sum(b) * index_sum(l);
  }
  return w;
}

FimPair fim_pair(const WaveformWeights& w, const DelayDoppler& dd) {
  FimPair f;
  const Eigen::Vector2d& dt = dd.d_tau_dx;
  const Eigen::Vector2d& dfx = dd.d_f_dx;
  const Eigen::Vector2d& dfv = dd.d_f_dv;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      f.f_p(i, j) = dt[i] * dt[j] * w.w_tt + dfx[i] * dfx[j] * w.w_ff -
                    (dfx[i] * dt[j] + dfx[j] * dt[i]) * w.w_tf;
      f.f_pv(i, j) = dfv[j] * (-w.w_tf * dt[i] + w.w_ff * dfx[i]);
      f.f_v(i, j) = dfv[i] * dfv[j] * w.w_ff;
    }
  }
  return f;
}

Eigen::Matrix4d fim_total(int target, const TargetState& state, const RegimeContext& ctx,
                          const BeamPowerPlan& plan, const Scenario& scenario,
                          const std::vector<int>& b_per_subband,
                          const std::vector<int>& l_per_subband) {
  const ScenarioConfig& cfg = scenario.config;
  std::vector<double> carrier_ratio(ctx.subbands.size());
  for (std::size_t si = 0; si < ctx.subbands.size(); ++si) {
    carrier_ratio[si] = cfg.subband_carrier(ctx.subbands[si]) / cfg.f_c;
  }

  Eigen::Matrix4d total = Eigen::Matrix4d::Zero();
  for (int a2 : ctx.aps) {  // transmit side of the cascaded path
    const double theta = relative_angle(state.x, scenario.ap_positions[a2]);
    std::vector<double> gains(ctx.subbands.size());
    for (std::size_t si = 0; si < ctx.subbands.size(); ++si) {
      gains[si] = sense_gain(a2, target, ctx.subbands[si], ctx, plan, theta, cfg.n_tx);
    }
    for (int a : ctx.aps) {  // receive side
      const double lam = cascaded_fading(state.x, scenario.ap_positions[a],
                                         scenario.ap_positions[a2], cfg.g_r, cfg.n_tx,
                                         cfg.sigma_rcs, cfg.f_c);
      const WaveformWeights w = waveform_weights(gains, b_per_subband, l_per_subband,
                                                 carrier_ratio, lam, cfg.delta_f, cfg.t_sym);
      const DelayDoppler dd = delay_doppler(state, scenario.ap_positions[a],
                                            scenario.ap_positions[a2], cfg.f_c);
      total += fim_pair(w, dd).assemble() / scenario.ap_noise[a];
    }
  }
  // Symmetrize the numerical residue.
  return 0.5 * (total + total.transpose());
}

Eigen::Matrix4d bfim_update(const SensingBelief& belief, const Eigen::Matrix4d& f_meas,
                            const Eigen::Matrix4d& process_cov,
                            const Eigen::Matrix4d& transition) {
  Eigen::LLT<Eigen::Matrix4d> llt(belief.j_prev);
  if (llt.info() != Eigen::Success) {
    throw NumericError("bfim_update: prior information matrix is not positive definite");
  }
  const Eigen::Matrix4d j_prev_inv = llt.solve(Eigen::Matrix4d::Identity());
  Eigen::Matrix4d predicted_cov =
      process_cov + transition * j_prev_inv * transition.transpose();
  predicted_cov = 0.5 * (predicted_cov + predicted_cov.transpose());
  Eigen::LLT<Eigen::Matrix4d> llt_pred(predicted_cov);
  if (llt_pred.info() != Eigen::Success) {
    throw NumericError("bfim_update: predicted covariance is not positive definite");
  }
  Eigen::Matrix4d j = llt_pred.solve(Eigen::Matrix4d::Identity());

  // Measurement information: invert the diagonal CRB of the measurement FIM;
  // zero-information directions contribute nothing.
  const Eigen::Vector4d crb_diag = psd_pinv(0.5 * (f_meas + f_meas.transpose())).diagonal();
  for (int i = 0; i < 4; ++i) {
    if (crb_diag[i] > 0.0 && std::isfinite(crb_diag[i])) j(i, i) += 1.0 / crb_diag[i];
  }
  return 0.5 * (j + j.transpose());
}

std::pair<double, double> sensing_errors(const Eigen::Matrix4d& j) {
  Eigen::LLT<Eigen::Matrix4d> llt(j);
  if (llt.info() != Eigen::Success) {
    throw NumericError("sensing_errors: information matrix is singular or indefinite");
  }
  const Eigen::Matrix4d cov = llt.solve(Eigen::Matrix4d::Identity());
  return {cov(0, 0) + cov(1, 1), cov(2, 2) + cov(3, 3)};
}

Eigen::Vector4d predict_state(const SensingBelief& belief, const Eigen::Matrix4d& transition) {
  return transition * belief.x_est;
}

}  // namespace entisac
