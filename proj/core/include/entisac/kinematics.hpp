#pragma once

#include <Eigen/Dense>

#include "entisac/rng.hpp"

namespace entisac {

inline constexpr double kSpeedOfLight = 3.0e8;

/// 2-D constant-velocity target state at a given frame.
struct TargetState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();  ///< position (m)
  Eigen::Vector2d v = Eigen::Vector2d::Zero();  ///< velocity (m/s)
  int frame = 0;

  Eigen::Vector4d as_vector() const {
    Eigen::Vector4d s;
    s << x, v;
    return s;
  }
  static TargetState from_vector(const Eigen::Vector4d& s, int frame = 0) {
    return {s.head<2>(), s.tail<2>(), frame};
  }
};

/// Constant-velocity transition matrix [[1,T],[0,1]] (x) I2.
Eigen::Matrix4d mobility_transition(double t_bar);

/// Process-noise covariance delta_q * [[T^3/3, T^2/2],[T^2/2, T]] (x) I2.
Eigen::Matrix4d process_noise_cov(double delta_q, double t_bar);

/// One motion step with Gaussian process noise.
TargetState advance_target(const TargetState& s, double delta_q, double t_bar,
                           RandomStream& rng);

/// Round-trip delay/Doppler of the cascaded path AP a' -> target -> AP a,
/// with the analytic gradients needed for information-matrix assembly.
struct DelayDoppler {
  double tau = 0.0;  ///< round-trip delay (s)
  double f = 0.0;    ///< Doppler shift (Hz)
  Eigen::Vector2d d_tau_dx = Eigen::Vector2d::Zero();  ///< s/m
  Eigen::Vector2d d_f_dx = Eigen::Vector2d::Zero();    ///< Hz/m
  Eigen::Vector2d d_f_dv = Eigen::Vector2d::Zero();    ///< Hz/(m/s)
};

DelayDoppler delay_doppler(const TargetState& target, const Eigen::Vector2d& ap_a,
                           const Eigen::Vector2d& ap_a2, double f_c);

/// Half-wavelength ULA steering vector, unit Euclidean norm.
Eigen::VectorXcd steering(double theta, int n_tx);

/// Angle between two points under the y/x difference-ratio convention;
/// range (-pi/2, pi/2], symmetric in its arguments.
double relative_angle(const Eigen::Vector2d& from, const Eigen::Vector2d& to);

}  // namespace entisac
