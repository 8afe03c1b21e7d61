#include "entisac/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "entisac/errors.hpp"

namespace entisac {

Eigen::Matrix4d mobility_transition(double t_bar) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g(0, 2) = t_bar;
  g(1, 3) = t_bar;
  return g;
}

Eigen::Matrix4d process_noise_cov(double delta_q, double t_bar) {
  const double t = t_bar;
  Eigen::Matrix4d e = Eigen::Matrix4d::Zero();
  const double pp = delta_q * t * t * t / 3.0;
  const double pv = delta_q * t * t / 2.0;
  const double vv = delta_q * t;
  for (int ax = 0; ax < 2; ++ax) {
    e(ax, ax) = pp;
    e(ax, 2 + ax) = pv;
    e(2 + ax, ax) = pv;
    e(2 + ax, 2 + ax) = vv;
  }
  return e;
}

TargetState advance_target(const TargetState& s, double delta_q, double t_bar,
                           RandomStream& rng) {
  if (!(t_bar > 0.0)) throw NumericError("advance_target: t_bar must be positive");
  TargetState out;
  out.frame = s.frame + 1;
  out.x = s.x + t_bar * s.v;
  out.v = s.v;
  if (delta_q > 0.0) {
    // Cholesky factor of the per-axis 2x2 noise block:
    //   [T^3/3, T^2/2; T^2/2, T] = L L^T,
    //   L = [T^{3/2}/sqrt(3), 0; (sqrt(3)/2) T^{1/2}, T^{1/2}/2].
    const double sq = std::sqrt(delta_q);
    const double l00 = std::pow(t_bar, 1.5) / std::sqrt(3.0);
    const double l10 = std::sqrt(3.0) / 2.0 * std::sqrt(t_bar);
    const double l11 = std::sqrt(t_bar) / 2.0;
    for (int ax = 0; ax < 2; ++ax) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      out.x[ax] += sq * l00 * z1;
      out.v[ax] += sq * (l10 * z1 + l11 * z2);
    }
  }
  return out;
}

DelayDoppler delay_doppler(const TargetState& target, const Eigen::Vector2d& ap_a,
                           const Eigen::Vector2d& ap_a2, double f_c) {
  DelayDoppler out;
  const Eigen::Vector2d aps[2] = {ap_a, ap_a2};
  const double scale = f_c / kSpeedOfLight;
  for (const auto& ap : aps) {
    const Eigen::Vector2d r = ap - target.x;  // toward the AP
    const double d = r.norm();
    if (d <= 0.0) throw GeometryError("delay_doppler: target co-located with an AP");
    out.tau += d / kSpeedOfLight;
    out.d_tau_dx += (target.x - ap) / (d * kSpeedOfLight);
    const double radial = target.v.dot(r);  // v . (x_ap - x_q)
    out.f += scale * radial / d;
    // d/dx [v.(ap-x)/|ap-x|] = (v.r) r / d^3 - v / d  with r = ap - x.
    out.d_f_dx += scale * (radial * r / (d * d * d) - target.v / d);
    out.d_f_dv += scale * r / d;
  }
  return out;
}

Eigen::VectorXcd steering(double theta, int n_tx) {
  Eigen::VectorXcd v(n_tx);
  const double c = std::numbers::pi * std::sin(theta);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_tx));
  for (int i = 0; i < n_tx; ++i) {
    v[i] = norm * std::exp(std::complex<double>(0.0, -c * i));
  }
  return v;
}

double relative_angle(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  const double dx = to.x() - from.x();
  const double dy = to.y() - from.y();
  if (dx == 0.0 && dy == 0.0) throw GeometryError("relative_angle: coincident points");
  if (dx == 0.0) return std::copysign(std::numbers::pi / 2.0, dy);
  return std::atan(dy / dx);
}

}  // namespace entisac
