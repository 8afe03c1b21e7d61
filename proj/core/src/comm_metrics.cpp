#include "entisac/comm_metrics.hpp"

#include <cmath>
#include <complex>

#include "entisac/errors.hpp"

namespace entisac {

int effective_slots_local(int slots_per_frame, int users_per_cell, int d_ce) {
  const int slots = slots_per_frame - users_per_cell * d_ce;
  if (slots < 0) {
    throw InfeasibleFrameError("local estimation exceeds the frame slot budget");
  }
  return slots;
}

int effective_slots_federated(int slots_per_frame, int users_per_cell, int d_ce,
                              int max_unestimated) {
  const int slots = slots_per_frame - d_ce * (max_unestimated + users_per_cell);
  if (slots < 0) {
    throw InfeasibleFrameError("federated estimation exceeds the frame slot budget");
  }
  return slots;
}

double comm_sinr(int user, int subband, const RegimeContext& ctx,
                 const BeamPowerPlan& plan, const ChannelBook& book,
                 double sigma_user) {
  if (std::find(ctx.comm_users.begin(), ctx.comm_users.end(), user) == ctx.comm_users.end()) {
    throw std::logic_error("comm_sinr: user not served in this context");
  }
  if (std::find(ctx.subbands.begin(), ctx.subbands.end(), subband) == ctx.subbands.end()) {
    throw std::logic_error("comm_sinr: subband not served in this context");
  }

  std::complex<double> signal{0.0, 0.0};
  for (int a : ctx.aps) {
    const double p = plan.comm_power(a, user);
    if (p <= 0.0) continue;
    signal += std::sqrt(p) * book.estimate(a, user, subband).dot(plan.comm_beam(a, user, subband));
  }

  double interference = 0.0;
  for (int k2 : ctx.comm_users) {
    if (k2 == user) continue;
    std::complex<double> term{0.0, 0.0};
    for (int a : ctx.aps) {
      const double p = plan.comm_power(a, k2);
      if (p <= 0.0) continue;
      term += std::sqrt(p) * book.estimate(a, user, subband).dot(plan.comm_beam(a, k2, subband));
    }
    interference += std::norm(term);
  }

  // Effective noise: estimation error times everything each serving AP
  // radiates on this subband, plus thermal noise.
  double noise = sigma_user;
  for (int a : ctx.aps) {
    double radiated = 0.0;
    for (int k2 : ctx.comm_users) radiated += plan.comm_power(a, k2);
    for (int q : ctx.targets) radiated += plan.radar_power(a, q);
    noise += book.error_variance(a, user, subband) * radiated;
  }

  return std::norm(signal) / (interference + noise);
}

double effective_rate(const std::vector<double>& sinr_per_subband,
                      const std::vector<int>& b_per_subband,
                      const std::vector<int>& l_per_subband, int m, int b, int l) {
  const double denom = static_cast<double>(m) * b * l;
  double rate = 0.0;
  for (std::size_t i = 0; i < sinr_per_subband.size(); ++i) {
    rate += (static_cast<double>(b_per_subband[i]) * l_per_subband[i] / denom) *
            std::log1p(sinr_per_subband[i]);
  }
  return rate;
}

}  // namespace entisac
